"""numba kernels for the brute-force hot loops.

* ``candidate_classes``: subsets of one cell that may be a basic set;
* ``naive_partitions``: filter every set partition through the S-ring axioms;
* ``difference_set_dfs``: the exhaustive difference-set search.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _class_ok(mask, mul, inv, qcls, r, xs, h1, h2, first1, first2):
    m = 0
    for x in range(mul.shape[0]):
        if (mask >> np.uint64(x)) & np.uint64(1):
            xs[m] = x
            m += 1
    for i in range(m):
        z = xs[i]
        for k in range(r + 2):
            h1[k] = 0
            h2[k] = 0
        for j in range(m):
            x = xs[j]
            w = mul[inv[x], z]
            h1[qcls[w]] += 1
            if (mask >> np.uint64(w)) & np.uint64(1):
                h1[r] += 1
            if (mask >> np.uint64(inv[w])) & np.uint64(1):
                h1[r + 1] += 1
            w = mul[z, inv[x]]
            h2[qcls[w]] += 1
            if (mask >> np.uint64(inv[w])) & np.uint64(1):
                h2[r + 1] += 1
        if i == 0:
            for k in range(r + 2):
                first1[k] = h1[k]
                first2[k] = h2[k]
        else:
            for k in range(r + 2):
                if h1[k] != first1[k] or h2[k] != first2[k]:
                    return False
    return True


@njit(cache=True)
def candidate_classes(opts, nopt, mul, inv, qcls, r, limit):
    """Enumerate unions of one option per unit and keep those passing the
    product-count filter.

    ``opts[u, k]`` is the element bitmask of option ``k`` of unit ``u``.
    Returns ``(masks, count, examined)``; ``count == -1`` means more than
    ``limit`` subsets would have to be examined.
    """
    U = opts.shape[0]
    total = 1
    for u in range(U):
        total *= nopt[u]
        if total > limit:
            return np.zeros(0, dtype=np.uint64), -1, 0
    n = mul.shape[0]
    xs = np.empty(n, dtype=np.int64)
    h1 = np.empty(r + 2, dtype=np.int64)
    h2 = np.empty(r + 2, dtype=np.int64)
    f1 = np.empty(r + 2, dtype=np.int64)
    f2 = np.empty(r + 2, dtype=np.int64)
    out = np.empty(1024, dtype=np.uint64)
    cnt = 0
    digits = np.zeros(U, dtype=np.int64)
    for _ in range(total):
        mask = np.uint64(0)
        for u in range(U):
            mask |= opts[u, digits[u]]
        if mask != np.uint64(0) and _class_ok(mask, mul, inv, qcls, r, xs, h1, h2, f1, f2):
            if cnt == out.shape[0]:
                bigger = np.empty(2 * cnt, dtype=np.uint64)
                bigger[:cnt] = out
                out = bigger
            out[cnt] = mask
            cnt += 1
        u = 0
        while u < U:
            digits[u] += 1
            if digits[u] < nopt[u]:
                break
            digits[u] = 0
            u += 1
    return out[:cnt], cnt, total


@njit(cache=True)
def _is_sring_labels(lab, nb, mul, inv, cnt, rep):
    n = mul.shape[0]
    # inverse closure: each class maps into a single class
    img = np.full(nb, -1, dtype=np.int64)
    for x in range(n):
        c = lab[x]
        d = lab[inv[x]]
        if img[c] == -1:
            img[c] = d
        elif img[c] != d:
            return False
    for c in range(nb):
        rep[c] = -1
    for z in range(n):
        if rep[lab[z]] == -1:
            rep[lab[z]] = z
    # counts of z = x y by (class x, class y) must agree with the class representative
    for z in range(n):
        r0 = rep[lab[z]]
        if r0 == z:
            continue
        for k in range(nb * nb):
            cnt[0, k] = 0
            cnt[1, k] = 0
        for x in range(n):
            cnt[0, lab[x] * nb + lab[mul[inv[x], r0]]] += 1
            cnt[1, lab[x] * nb + lab[mul[inv[x], z]]] += 1
        for k in range(nb * nb):
            if cnt[0, k] != cnt[1, k]:
                return False
    return True


@njit(cache=True)
def naive_partitions(mul, inv, limit):
    """Every partition of the group with ``{0}`` a singleton that satisfies the
    S-ring axioms, as label rows.  Partitions of ``1..n-1`` are walked as
    restricted growth strings.  ``status == -1`` when more than ``limit``
    partitions would be visited."""
    n = mul.shape[0]
    out = np.empty((16, n), dtype=np.int64)
    found = 0
    visited = 0
    lab = np.zeros(n, dtype=np.int64)
    cnt = np.zeros((2, n * n), dtype=np.int64)
    rep = np.zeros(n, dtype=np.int64)
    if n == 1:
        out[0, 0] = 0
        return out[:1], 1, 1
    m = n - 1
    a = np.zeros(m, dtype=np.int64)   # restricted growth string for elements 1..n-1
    b = np.ones(m, dtype=np.int64)    # b[i] = 1 + max(a[:i])
    while True:
        visited += 1
        if visited > limit:
            return out[:found], -1, visited
        nb = 1
        for i in range(m):
            lab[i + 1] = a[i] + 1
            if a[i] + 2 > nb:
                nb = a[i] + 2
        if _is_sring_labels(lab, nb, mul, inv, cnt, rep):
            if found == out.shape[0]:
                bigger = np.empty((2 * found, n), dtype=np.int64)
                bigger[:found] = out
                out = bigger
            out[found, :] = lab
            found += 1
        # next restricted growth string
        i = m - 1
        while i > 0 and a[i] == b[i]:
            i -= 1
        if i == 0:
            break
        a[i] += 1
        mx = b[i] if b[i] > a[i] + 1 else a[i] + 1
        for j in range(i + 1, m):
            a[j] = 0
            b[j] = mx
    return out[:found], found, visited


@njit(cache=True)
def difference_set_dfs(p, k, lam, limit):
    """All ``k``-subsets of ``Z_p`` containing ``{0, 1}`` whose differences
    each occur exactly ``lam`` times.  Elements are added in increasing
    order; a branch dies as soon as some difference exceeds ``lam``.
    Returns ``(rows, count, nodes)``; ``count == -1`` when more than
    ``limit`` nodes would be visited."""
    out = np.empty((16, k), dtype=np.int64)
    found = 0
    nodes = 0
    cnt = np.zeros(p, dtype=np.int64)
    xs = np.zeros(k, dtype=np.int64)
    if k < 2:
        return out[:0], 0, 0
    xs[0] = 0
    xs[1] = 1
    cnt[1] += 1
    cnt[p - 1] += 1
    if cnt[1] > lam or cnt[p - 1] > lam:
        return out[:0], 0, 1
    d = 2
    nxt = 2  # next candidate element at depth d
    while True:
        if d == k:
            if found == out.shape[0]:
                bigger = np.empty((2 * found, k), dtype=np.int64)
                bigger[:found] = out
                out = bigger
            out[found, :] = xs
            found += 1
            # backtrack from the full set
            d -= 1
            c = xs[d]
            for i in range(d):
                cnt[(c - xs[i]) % p] -= 1
                cnt[(xs[i] - c) % p] -= 1
            nxt = c + 1
            continue
        if nxt > p - (k - d):
            if d == 2:
                break
            d -= 1
            c = xs[d]
            for i in range(d):
                cnt[(c - xs[i]) % p] -= 1
                cnt[(xs[i] - c) % p] -= 1
            nxt = c + 1
            continue
        nodes += 1
        if nodes > limit:
            return out[:found], -1, nodes
        c = nxt
        ok = True
        j = 0
        while j < d:
            a = (c - xs[j]) % p
            b = (xs[j] - c) % p
            cnt[a] += 1
            cnt[b] += 1
            j += 1
            if cnt[a] > lam or cnt[b] > lam:
                ok = False
                break
        if ok:
            xs[d] = c
            d += 1
            nxt = c + 1
        else:
            for i in range(j):
                cnt[(c - xs[i]) % p] -= 1
                cnt[(xs[i] - c) % p] -= 1
            nxt = c + 1
    return out[:found], found, nodes
