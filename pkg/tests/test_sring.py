import pytest
from hypothesis import given
from hypothesis import strategies as st

from schurlab.diffset import paley_set
from schurlab.groups import automorphisms, induced_group, make_cyclic, make_dihedral, power_automorphism, quotient_group
from schurlab.permgrp import PermGroup, right_regular_representation, symmetric_group
from schurlab.sring import (
    SRingAxiomError,
    a_subgroups,
    cayley_automorphisms,
    check_identities,
    cyclotomic,
    from_difference_set,
    from_perm_group,
    generated_subgroup,
    group_ring,
    is_primitive,
    is_symmetric,
    is_wreath_over,
    quotient_sring,
    radical,
    restrict,
    sring_closure,
    structure_constants,
    trivial_sring,
    verify_sring,
    wreath,
)

SINGER = (0, 1, 3, 9)


def sigma(G, t):
    return PermGroup.from_generators(G.order, [power_automorphism(G, t)])


def test_rank_two_partition():
    G = make_dihedral(5)
    A = verify_sring(G, [[0], range(1, 10)])
    assert A.rank == 2
    assert A == trivial_sring(G)


def test_discrete_partition_is_group_ring():
    G = make_cyclic(6)
    assert verify_sring(G, [[x] for x in range(6)]) == group_ring(G)


def test_bad_partition_over_c5():
    with pytest.raises(SRingAxiomError) as exc:
        verify_sring(make_cyclic(5), [[0], [1, 2], [3, 4]])
    assert exc.value.axiom == "closure"


@pytest.mark.parametrize(
    "parts, axiom",
    [
        ([[0, 1], [2], [3], [4]], "identity"),
        ([[0], [1], [2, 3, 4]], "inverse"),
        ([[0], [1, 2, 3]], "partition"),
        ([[0], [1, 2, 3, 4], [4]], "partition"),
    ],
)
def test_axiom_witnesses(parts, axiom):
    with pytest.raises(SRingAxiomError) as exc:
        verify_sring(make_cyclic(5), parts)
    assert exc.value.axiom == axiom


def test_canonical_class_order():
    A = verify_sring(make_cyclic(13), [[0], [4, 12, 10], [1, 9, 3], [2, 6, 5], [8, 11, 7]])
    assert A.classes == ((0,), (1, 3, 9), (2, 5, 6), (4, 10, 12), (7, 8, 11))


def test_rank_two_over_c5_sum2():
    sc = structure_constants(trivial_sring(make_cyclic(5)))
    # c^Z_{XY} |Z| summed over Z, X = Y = G#
    assert sum(sc.c[1, 1, z] * sc.sizes[z] for z in range(2)) == 16
    assert check_identities(sc).ok


def test_corrupted_table_reports_sum1():
    sc = structure_constants(from_difference_set(make_dihedral(13), SINGER))
    sc.c[1, 2, 3] += 1
    rep = check_identities(sc)
    assert not rep.ok
    assert rep.counts["sum1"] >= 1


def test_closure_examples():
    G = make_cyclic(13)
    assert sring_closure(G).rank == 2
    assert sring_closure(G, [{1}]) == group_ring(G)
    D26 = make_dihedral(13)
    bD = [13 + (-d) % 13 for d in SINGER]
    assert sring_closure(D26, [bD]) == from_difference_set(D26, SINGER)


def test_a_subgroups_of_rank_two():
    G = make_dihedral(7)
    assert sorted(H.order for H in a_subgroups(trivial_sring(G))) == [1, 14]


def test_primitivity():
    assert is_primitive(trivial_sring(make_dihedral(5)))
    assert is_primitive(group_ring(make_cyclic(13)))
    assert not is_primitive(from_difference_set(make_dihedral(13), SINGER))


def test_sections():
    G = make_dihedral(13)
    A = from_difference_set(G, SINGER)
    Q = quotient_sring(A, range(26), range(13))
    assert Q.group.order == 2 and Q.rank == 2
    ZG = group_ring(G)
    assert quotient_sring(ZG, range(26), [0]).rank == 26
    C13 = make_cyclic(13)
    B = cyclotomic(C13, sigma(C13, 3))
    assert quotient_sring(B, range(13), range(13)).rank == 1


def test_restriction():
    G = make_dihedral(13)
    A = from_difference_set(G, SINGER)
    R = restrict(A, range(13))
    assert R.group.order == 13 and R.rank == 2


def test_cyclotomic_examples():
    G = make_cyclic(13)
    assert cyclotomic(G, PermGroup.from_generators(13, [])) == group_ring(G)
    assert cyclotomic(G, sigma(G, 2)).rank == 2
    A = cyclotomic(G, sigma(G, 3))
    assert A.classes == ((0,), (1, 3, 9), (2, 5, 6), (4, 10, 12), (7, 8, 11))


def test_schur_construction():
    G = make_dihedral(5)
    assert from_perm_group(G, symmetric_group(10)).rank == 2
    assert from_perm_group(G, right_regular_representation(G)) == group_ring(G)
    with pytest.raises(ValueError):
        from_perm_group(G, PermGroup.from_generators(10, []))


def test_wreath_of_rank_two_operands():
    G = make_dihedral(7)
    H, _ = induced_group(G, range(7))
    Q, _ = quotient_group(G, range(14), range(7))
    W = wreath(G, range(7), trivial_sring(H), trivial_sring(Q))
    assert W.classes == ((0,), tuple(range(1, 7)), tuple(range(7, 14)))
    assert is_wreath_over(W, range(7))


def test_wreath_over_trivial_subgroup():
    G = make_dihedral(5)
    H, _ = induced_group(G, [0])
    Q, pi = quotient_group(G, range(10), [0])
    B = verify_sring(Q, [[0], range(1, Q.order)])
    W = wreath(G, [0], group_ring(H), B)
    assert W.rank == 2


def test_singer_is_not_a_wreath():
    A = from_difference_set(make_dihedral(13), SINGER)
    assert not is_wreath_over(A, range(13))


def test_difference_set_srings():
    A = from_difference_set(make_dihedral(13), SINGER)
    assert sorted(A.sizes) == [1, 4, 9, 12]
    P = from_difference_set(make_dihedral(11), paley_set(11).elements)
    assert sorted(P.sizes) == [1, 5, 6, 10]
    rest = [x for x in range(13) if x not in SINGER]
    assert from_difference_set(make_dihedral(13), rest) == A


def test_symmetry():
    assert is_symmetric(trivial_sring(make_cyclic(7)))
    assert not is_symmetric(group_ring(make_cyclic(3)))
    assert is_symmetric(group_ring(make_dihedral(3))) is False


def test_cayley_automorphism_of_singer():
    # 3 is a multiplier of {0,1,3,9}; a -> a^3, b -> b fixes every class
    G = make_dihedral(13)
    A = from_difference_set(G, SINGER)
    phi = tuple((3 * x) % 13 if x < 13 else 13 + (3 * (x - 13)) % 13 for x in range(26))
    K = cayley_automorphisms(A)
    assert phi in K
    # 2 is not a multiplier, so the same map with 2 is not Cayley
    psi = tuple((2 * x) % 13 if x < 13 else 13 + (2 * (x - 13)) % 13 for x in range(26))
    assert psi not in K


def test_radical_and_generated_subgroup():
    G = make_dihedral(7)
    A = trivial_sring(G)
    assert radical(A, range(1, 14)).order == 1
    assert generated_subgroup(A, range(1, 14)).order == 14


def test_serialization_round_trip():
    from schurlab.sring import parse_classes

    A = from_difference_set(make_dihedral(13), SINGER)
    assert verify_sring(A.group, parse_classes(A.serialize())) == A


seed_sets = st.sampled_from([5, 7, 13]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.sets(st.integers(0, 2 * p - 1), min_size=1), max_size=2))
)


@given(seed_sets)
def test_closure_is_idempotent_and_keeps_seeds(data):
    p, seeds = data
    G = make_dihedral(p)
    A = sring_closure(G, seeds)
    for T in seeds:
        assert A.is_aset(T)
    assert sring_closure(G, A.classes) == A
    assert check_identities(structure_constants(A)).ok


@given(st.sampled_from([6, 8, 9, 10, 12]), st.data())
def test_cyclotomic_constructions_satisfy_identities(n, data):
    G = make_cyclic(n)
    auts = automorphisms(G)
    gens = data.draw(st.lists(st.sampled_from(auts), max_size=2))
    A = cyclotomic(G, PermGroup.from_generators(n, gens))
    assert check_identities(structure_constants(A)).ok
    assert cayley_automorphisms(A).orbits() == [list(c) for c in sorted(A.classes)]
