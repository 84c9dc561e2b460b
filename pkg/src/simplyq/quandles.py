"""Finite left quasigroups, racks, and quandles as operation tables.

Tables are n×n numpy arrays whose rows are the left translations L_x.
Permutation groups (LMlt, Dis, and friends) are enumerated by closure with a
cap; partitions are dense class-id arrays.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .groups import CapExceeded, NotNormal, validate_group


class QuandleError(ValueError):
    pass


class RowNotBijective(QuandleError):
    pass


class NotConnected(QuandleError):
    pass


class NotLatin(QuandleError):
    pass


class NotCongruence(QuandleError):
    pass


def _permgroup_cap():
    return int(os.environ.get("SQ_PERMGROUP_CAP", 2_000_000))


@dataclass(frozen=True, eq=False)
class QuandleTable:
    n: int
    star: np.ndarray
    ldiv: np.ndarray
    is_rack: bool
    is_quandle: bool
    is_latin: bool
    is_involutory: bool
    is_connected: bool
    is_faithful: bool


@dataclass(eq=False)
class PermGroup:
    """Permutation group of given degree, generated by image arrays."""

    degree: int
    gens: list
    labels: list = None
    elements: list = field(default=None, repr=False)

    @property
    def order(self):
        assert self.elements is not None, "call enumerate_group first"
        return len(self.elements)


@dataclass(frozen=True)
class Partition:
    """Dense class ids 0..count-1 over points 0..n-1."""

    ids: np.ndarray
    count: int

    @property
    def n(self):
        return len(self.ids)


def normalize_partition(ids):
    ids = np.asarray(ids)
    _, dense = np.unique(ids, return_inverse=True)
    return Partition(dense.astype(np.int64), int(dense.max(initial=-1)) + 1)


def discrete_partition(n):
    return Partition(np.arange(n, dtype=np.int64), n)


def refines(fine, coarse):
    """True when every class of `fine` sits inside one class of `coarse`."""
    seen = {}
    for f, c in zip(fine.ids.tolist(), coarse.ids.tolist()):
        if seen.setdefault(f, c) != c:
            return False
    return True


def validate_left_quasigroup(table):
    """Check rows are permutations, derive left division, classify axioms."""
    star = np.array(table, dtype=np.int64)
    if star.ndim != 2 or star.shape[0] != star.shape[1]:
        raise QuandleError("table must be square")
    n = star.shape[0]
    if n and (star.min() < 0 or star.max() >= n):
        raise QuandleError("entries out of range")
    ldiv = np.empty_like(star)
    for x in range(n):
        row = star[x]
        if len(np.unique(row)) != n:
            raise RowNotBijective(x)
        ldiv[x, row] = np.arange(n)
    flags = classify_axioms(star, ldiv)
    return QuandleTable(n=n, star=star, ldiv=ldiv, **flags)


def classify_axioms(star, ldiv):
    """Exhaustive rack/quandle/latin/involutory/connected/faithful flags."""
    n = star.shape[0]
    rack = True
    for x in range(n):
        row = star[x]
        if not np.array_equal(star[np.ix_(row, row)], row[star]):
            rack = False
            break
    quandle = rack and bool(np.array_equal(np.diagonal(star), np.arange(n)))
    latin = all(len(np.unique(star[:, y])) == n for y in range(n))
    involutory = bool(np.array_equal(star, ldiv))
    orbit = _orbit_of(0, list(star), n) if n else set()
    connected = len(orbit) == n
    faithful = len({star[x].tobytes() for x in range(n)}) == n
    return {
        "is_rack": rack,
        "is_quandle": quandle,
        "is_latin": latin,
        "is_involutory": involutory,
        "is_connected": connected,
        "is_faithful": faithful,
    }


def from_table(table):
    return validate_left_quasigroup(table)


def _orbit_of(x, gens, n):
    seen = {x}
    frontier = [x]
    while frontier:
        y = frontier.pop()
        for g in gens:
            z = int(g[y])
            if z not in seen:
                seen.add(z)
                frontier.append(z)
    return seen


def _compose(a, b):
    """Permutation acting as a after b: (a∘b)(x) = a(b(x))."""
    return a[b]


def _invert(a):
    inv = np.empty_like(a)
    inv[a] = np.arange(len(a))
    return inv


def enumerate_group(pg, cap=None):
    """Fill pg.elements by BFS closure of the generators; raises CapExceeded."""
    if pg.elements is not None:
        return pg
    cap = _permgroup_cap() if cap is None else cap
    n = pg.degree
    ident = np.arange(n, dtype=np.int64)
    elements = [ident]
    seen = {ident.tobytes()}
    gens = [np.asarray(g, dtype=np.int64) for g in pg.gens]
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                w = g[h]
                key = w.tobytes()
                if key not in seen:
                    seen.add(key)
                    elements.append(w)
                    nxt.append(w)
                    if len(elements) > cap:
                        raise CapExceeded(f"permutation group exceeds cap {cap}")
        frontier = nxt
    pg.elements = elements
    return pg


def lmlt(q):
    """Left multiplication group ⟨L_x⟩ (elements not enumerated yet)."""
    gens = [q.star[x].copy() for x in range(q.n)]
    return PermGroup(q.n, gens, labels=[f"L{x}" for x in range(q.n)])


def dis(q):
    """Displacement group ⟨L_x L_y⁻¹⟩, generated by L_x L_0⁻¹."""
    if q.n == 0:
        return PermGroup(0, [], labels=[])
    inv0 = _invert(q.star[0])
    gens = [_compose(q.star[x], inv0) for x in range(q.n)]
    return PermGroup(q.n, gens, labels=[f"L{x}L0^-1" for x in range(q.n)])


def orbit_partition(n, gens):
    """Orbits of ⟨gens⟩ acting on 0..n-1, as a union-find partition."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for x in range(n):
            ra, rb = find(x), find(int(g[x]))
            if ra != rb:
                parent[ra] = rb
    return normalize_partition([find(x) for x in range(n)])


def orbit_congruence(q, pg, check_normal=False):
    """Orbit partition O_N of a (normal) subgroup N of LMlt."""
    if check_normal:
        enumerate_group(pg)
        member = {np.asarray(e).tobytes() for e in pg.elements}
        for lx in q.star:
            lx_inv = _invert(lx)
            for s in pg.gens:
                conj = _compose(lx, _compose(np.asarray(s), lx_inv))
                if conj.tobytes() not in member:
                    raise NotNormal("subgroup is not normal in LMlt")
    return orbit_partition(q.n, [np.asarray(g) for g in pg.gens])


def cayley_kernel(q):
    """Classes of points with identical left translations."""
    keys = {}
    ids = []
    for x in range(q.n):
        ids.append(keys.setdefault(q.star[x].tobytes(), len(keys)))
    return normalize_partition(ids)


def congruence_generated(q, pairs):
    """Smallest congruence containing the pairs (closure through * and \\)."""
    n = q.n
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    work = [(int(a), int(b)) for a, b in pairs]
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[ra] = rb
        for z in range(n):
            work.append((int(q.star[a, z]), int(q.star[b, z])))
            work.append((int(q.star[z, a]), int(q.star[z, b])))
            work.append((int(q.ldiv[a, z]), int(q.ldiv[b, z])))
            work.append((int(q.ldiv[z, a]), int(q.ldiv[z, b])))
    return normalize_partition([find(x) for x in range(n)])


def quotient_quandle(q, part):
    """Quandle on congruence classes; raises NotCongruence with a witness."""
    ids = part.ids
    reps = np.zeros(part.count, dtype=np.int64)
    for x in range(q.n - 1, -1, -1):
        reps[ids[x]] = x
    table = ids[q.star[np.ix_(reps, reps)]]
    expected = table[ids[:, None], ids[None, :]]
    bad = np.argwhere(expected != ids[q.star])
    if len(bad):
        x, y = map(int, bad[0])
        raise NotCongruence((int(reps[ids[x]]), int(reps[ids[y]]), x, y))
    return validate_left_quasigroup(table), Partition(ids.copy(), part.count)


def dis_rel(q, part):
    """Dis_α = ⟨L_x L_y⁻¹ : x α y⟩."""
    gens, labels = [], []
    reps = {}
    for x in range(q.n):
        c = int(part.ids[x])
        if c not in reps:
            reps[c] = x
            continue
        r = reps[c]
        gens.append(_compose(q.star[x], _invert(q.star[r])))
        labels.append(f"L{x}L{r}^-1")
    return PermGroup(q.n, gens, labels=labels)


def dis_ker(q, part):
    """Dis^α: displacements acting trivially on Q/α via the quotient map.

    Enumerates pairs (h, π_α(h)) over the generators (L_x, L_[x]) and keeps
    the Dis elements whose quotient component is the identity.
    """
    qt, _ = quotient_quandle(q, part)
    k = part.count
    ids = part.ids
    if q.n == 0:
        return PermGroup(0, [], labels=[])
    pair_gens = []
    for x in range(q.n):
        down = qt.star[ids[x]]
        pair_gens.append(np.concatenate([q.star[x], down + q.n]))
    inv0 = _invert(pair_gens[0])
    dis_pair = PermGroup(q.n + k, [_compose(g, inv0) for g in pair_gens])
    enumerate_group(dis_pair)
    ident_down = np.arange(q.n, q.n + k)
    kernel = [
        e[: q.n]
        for e in dis_pair.elements
        if np.array_equal(e[q.n :], ident_down)
    ]
    pg = PermGroup(q.n, kernel, labels=None)
    pg.elements = kernel
    return pg


def _normal_orbit_partition(n, seed_gens, invariance_gens):
    """Orbits of the normal closure of ⟨seed_gens⟩ under the other gens."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    work = [(x, int(s[x])) for s in seed_gens for x in range(n)]
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[ra] = rb
        for g in invariance_gens:
            work.append((int(g[a]), int(g[b])))
    return normalize_partition([find(x) for x in range(n)])


def gamma_partition(q):
    """γ_Q: orbit partition of the derived subgroup of Dis (Q connected)."""
    if not q.is_connected:
        raise NotConnected("gamma is defined for connected quandles")
    d = dis(q)
    gens = [np.asarray(g) for g in d.gens]
    comms = []
    for i, a in enumerate(gens):
        ainv = _invert(a)
        for b in gens[i + 1 :]:
            comms.append(_compose(ainv, _compose(_invert(b), _compose(a, b))))
    return _normal_orbit_partition(q.n, comms, gens)


def derived_perm_group(pg):
    """Derived subgroup of an enumerated permutation group (as elements)."""
    enumerate_group(pg)
    elems = pg.elements
    comms, seen = [], set()
    for a in elems:
        ainv = _invert(a)
        for b in elems:
            c = _compose(ainv, _compose(_invert(b), _compose(a, b)))
            key = c.tobytes()
            if key not in seen:
                seen.add(key)
                comms.append(c)
    out = PermGroup(pg.degree, comms)
    enumerate_group(out)
    return out


def hn_congruence(q, m):
    """Orbit partition of H_m = ⟨L_x^m L_y^{-m}⟩."""
    powers = []
    for x in range(q.n):
        w = np.arange(q.n)
        for _ in range(m % _lcm_order(q.star[x])):
            w = _compose(q.star[x], w)
        powers.append(w)
    inv0 = _invert(powers[0])
    gens = [_compose(w, inv0) for w in powers]
    return orbit_partition(q.n, gens)


def _lcm_order(perm):
    seen = [False] * len(perm)
    out = 1
    for x in range(len(perm)):
        if seen[x]:
            continue
        length, y = 0, x
        while not seen[y]:
            seen[y] = True
            y = int(perm[y])
            length += 1
        out = out * length // np.gcd(out, length)
    return out


def subquandle_generated(q, seed):
    """Closure of the seed set under * and \\ (sorted tuple of indices)."""
    seen = set(int(s) for s in seed)
    frontier = list(seen)
    while frontier:
        x = frontier.pop()
        grow = set()
        for y in seen:
            grow.update(
                (
                    int(q.star[x, y]),
                    int(q.star[y, x]),
                    int(q.ldiv[x, y]),
                    int(q.ldiv[y, x]),
                )
            )
        for z in grow:
            if z not in seen:
                seen.add(z)
                frontier.append(z)
    return tuple(sorted(seen))


def _cycle_type(perm):
    seen = [False] * len(perm)
    lengths = []
    for x in range(len(perm)):
        if seen[x]:
            continue
        length, y = 0, x
        while not seen[y]:
            seen[y] = True
            y = int(perm[y])
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def _iso_invariants(q):
    cycle_types = sorted(_cycle_type(q.star[x]) for x in range(q.n))
    orbits = orbit_partition(q.n, list(q.star))
    orbit_sizes = sorted(np.bincount(orbits.ids).tolist())
    idem = int(np.sum(np.diagonal(q.star) == np.arange(q.n)))
    return idem, cycle_types, orbit_sizes


def _close_partial_iso(q1, q2, pairs):
    """Close a partial point map under *; image dict or None on conflict."""
    image = {}
    work = list(pairs)
    while work:
        a, b = work.pop()
        cur = image.get(a)
        if cur is not None:
            if cur != b:
                return None
            continue
        image[a] = b
        for c, d in list(image.items()):
            for (s1, t1), (s2, t2) in (((a, c), (b, d)), ((c, a), (d, b))):
                work.append((int(q1.star[s1, t1]), int(q2.star[s2, t2])))
                work.append((int(q1.ldiv[s1, t1]), int(q2.ldiv[s2, t2])))
    values = set(image.values())
    if len(values) != len(image):
        return None
    return image


def quandle_isomorphic(q1, q2):
    """Isomorphism as an image array, or None."""
    if q1.n != q2.n:
        return None
    if _iso_invariants(q1) != _iso_invariants(q2):
        return None
    types2 = {}
    for y in range(q2.n):
        types2.setdefault(_cycle_type(q2.star[y]), []).append(y)

    def extend(image):
        if len(image) == q1.n:
            return image
        x = min(a for a in range(q1.n) if a not in image)
        used = set(image.values())
        for y in types2.get(_cycle_type(q1.star[x]), []):
            if y in used:
                continue
            nxt = _close_partial_iso(q1, q2, list(image.items()) + [(x, y)])
            if nxt is None:
                continue
            res = extend(nxt)
            if res is not None:
                return res
        return None

    image = extend({})
    if image is None:
        return None
    out = np.empty(q1.n, dtype=np.int64)
    for a, b in image.items():
        out[a] = b
    return out


def coset_representation(q, x=0):
    """Dis(Q) as an abstract group, the stabilizer of x, conjugation by L_x.

    Returns (group, stabilizer indices, conj automorphism as an index map,
    point map) where point map sends each Dis element index to its image of x.
    """
    if not q.is_connected:
        raise NotConnected("coset representation needs a connected quandle")
    d = dis(q)
    enumerate_group(d)
    elems = d.elements
    index = {e.tobytes(): i for i, e in enumerate(elems)}
    size = len(elems)
    mul = np.empty((size, size), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[_compose(a, b).tobytes()]
    group = validate_group(mul.tolist())
    stab = tuple(i for i, e in enumerate(elems) if int(e[x]) == x)
    lx = q.star[x]
    lx_inv = _invert(lx)
    conj = np.array(
        [index[_compose(lx, _compose(e, lx_inv)).tobytes()] for e in elems],
        dtype=np.int64,
    )
    points = np.array([int(e[x]) for e in elems], dtype=np.int64)
    return group, stab, conj, points


def is_principal(q):
    """Connected Q with Dis acting regularly (|Dis| = |Q|)."""
    if not q.is_connected:
        raise NotConnected("principality is defined for connected quandles")
    try:
        d = enumerate_group(dis(q), cap=q.n)
    except CapExceeded:
        return False
    return d.order == q.n


def write_quandle(path, q):
    lines = [f"quandle {q.n}"]
    lines += [" ".join(str(int(v)) for v in row) for row in q.star]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_quandle(path):
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens or tokens[0] != "quandle":
        raise QuandleError("expected header 'quandle n'")
    n = int(tokens[1])
    body = [int(t) for t in tokens[2:]]
    if len(body) != n * n:
        raise QuandleError("wrong number of entries")
    return validate_left_quasigroup(np.array(body).reshape(n, n))
