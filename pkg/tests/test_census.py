import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurlab import BudgetExceeded
from schurlab.census import census_text, enumerate_srings, naive_enumerate, read_census, write_census
from schurlab.groups import automorphisms, make_cyclic, make_dihedral, parse_group_spec
from schurlab.permgrp import PermGroup
from schurlab.sring import check_identities, cyclotomic, group_ring, structure_constants, trivial_sring

# frozen at first build; cyclic and small dihedral values agree with the naive oracle
CYCLIC_COUNTS = {
    1: 1, 2: 1, 3: 2, 4: 3, 5: 3, 6: 7, 7: 4, 8: 10, 9: 7, 10: 10, 11: 4, 12: 32, 13: 6,
    14: 13, 15: 21, 16: 37, 17: 5, 18: 42, 19: 6, 20: 47, 21: 27, 22: 13, 23: 4, 24: 172,
    25: 13, 26: 19,
}
DIHEDRAL_COUNTS = {6: 10, 10: 25, 14: 55, 22: 83, 26: 177}


@pytest.mark.parametrize("n", sorted(CYCLIC_COUNTS))
def test_cyclic_census_counts(census, n):
    assert len(census(f"C:{n}")) == CYCLIC_COUNTS[n]


@pytest.mark.parametrize("order", sorted(DIHEDRAL_COUNTS))
def test_dihedral_census_counts(census, order):
    assert len(census(f"D:{order}")) == DIHEDRAL_COUNTS[order]


def test_c2_has_one_sring(census):
    (A,) = census("C:2").srings
    assert A == group_ring(make_cyclic(2)) == trivial_sring(make_cyclic(2))


def test_prime_cyclic_census_is_cyclotomic(census):
    # over C_p every S-ring is cyc(K, C_p) for a unique K <= Aut(C_p)
    for p in (5, 7, 11, 13):
        G = make_cyclic(p)
        auts = automorphisms(G)
        cyc = set()
        for f in auts:
            cyc.add(cyclotomic(G, PermGroup.from_generators(p, [f])).classes)
        assert census(f"C:{p}").keys() == cyc


def test_d26_contents(census):
    c = census("D:26")
    G = c.group
    keys = c.keys()
    assert group_ring(G).classes in keys
    assert trivial_sring(G).classes in keys
    assert ((0,), tuple(range(1, 13)), tuple(range(13, 26))) in keys
    assert sum(1 for A in c.srings if A.rank == 4 and 4 in A.sizes and 9 in A.sizes) == 52


@pytest.mark.parametrize("spec", ["C:6", "C:8", "C:12", "D:6", "D:10"])
def test_oracle_equivalence_small(spec):
    G = parse_group_spec(spec)
    assert naive_enumerate(G).keys() == enumerate_srings(G).keys()


def test_naive_is_capped():
    with pytest.raises(ValueError):
        naive_enumerate(make_cyclic(15))


def test_every_entry_is_verified_and_consistent(census):
    for spec in ("D:14", "C:12", "D:22"):
        for e in census(spec).entries:
            A = e.sring
            assert check_identities(structure_constants(A)).ok
            assert e.rank == A.rank


def test_census_is_closed_under_group_automorphisms(census):
    for spec in ("D:10", "D:14", "C:12"):
        c = census(spec)
        keys = c.keys()
        for f in automorphisms(c.group):
            for A in c.srings:
                img = tuple(sorted((tuple(sorted(f[x] for x in cl)) for cl in A.classes), key=lambda t: (len(t), t[0])))
                assert img in keys


def test_file_round_trip_and_determinism(tmp_path, census):
    c = census("D:14")
    path = tmp_path / "d14.census"
    write_census(c, path)
    first = path.read_bytes()
    write_census(enumerate_srings(make_dihedral(7)), path)
    assert path.read_bytes() == first
    back = read_census(path)
    assert back.keys() == c.keys() and back.group.spec == "D:14"
    assert census_text(back) == first.decode()


def test_bad_census_file(tmp_path):
    p = tmp_path / "x.census"
    p.write_text("hello\n")
    with pytest.raises(ValueError):
        read_census(p)


def test_budget_and_resume(tmp_path, census):
    ck = tmp_path / "d26.json"
    G = make_dihedral(13)
    with pytest.raises(BudgetExceeded):
        enumerate_srings(G, node_budget=200, checkpoint=ck)
    state = json.loads(ck.read_text())
    assert 0 < state["done"] < state["branches"]
    resumed = enumerate_srings(G, checkpoint=ck)
    assert resumed.keys() == census("D:26").keys()


@settings(max_examples=15)
@given(st.sampled_from(["C:9", "C:10", "D:10", "D:14"]), st.data())
def test_random_entry_is_closure_of_its_classes(spec, data):
    from schurlab.sring import sring_closure

    c = enumerate_srings(parse_group_spec(spec))
    A = data.draw(st.sampled_from(c.srings))
    assert sring_closure(c.group, A.classes) == A
