"""Finite groups as explicit multiplication tables.

A group lives entirely in its n×n index table with the identity pinned at
index 0.  Subgroups are sorted index tuples, automorphisms and homomorphisms
are index arrays.  Everything is validated eagerly and immutable afterwards.
"""

from dataclasses import dataclass

import numpy as np
import sympy


class GroupError(ValueError):
    pass


class NotAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NotCancellative(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotInvariant(GroupError):
    pass


class NotPGroup(GroupError):
    pass


class NotNilpotent(GroupError):
    pass


class NotGenerating(GroupError):
    pass


class NotAbelian(GroupError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Group:
    """Multiplication table with identity 0 and precomputed inverses."""

    mul: np.ndarray
    inv: np.ndarray

    @property
    def n(self):
        return len(self.inv)


@dataclass(frozen=True, eq=False)
class Hom:
    """Group homomorphism given by the image array (source index -> target index)."""

    source: Group
    target: Group
    image: np.ndarray


def validate_group(table, assoc_witnesses=None):
    """Check a raw index table and return a Group with identity relabeled to 0.

    With `assoc_witnesses` (a generating set of indices), associativity is
    checked only with those elements as left multiplier, which suffices: the
    set of x with x(yz)=(xy)z for all y,z is closed under multiplication, so
    it contains the subgroup the witnesses generate.  Generation is verified.
    """
    mul = np.array(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
        raise GroupError("table is not square")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise GroupError("table entries out of range")
    rng = np.arange(n)
    ident = [e for e in range(n)
             if np.array_equal(mul[e], rng) and np.array_equal(mul[:, e], rng)]
    if not ident:
        raise NoIdentity("no two-sided identity element")
    e = ident[0]
    if e != 0:
        relabel = np.empty(n, dtype=np.int64)
        relabel[e] = 0
        relabel[:e] = np.arange(e) + 1
        relabel[e + 1:] = np.arange(e + 1, n)
        new = np.empty_like(mul)
        new[relabel[:, None], relabel[None, :]] = relabel[mul]
        mul = new
        if assoc_witnesses is not None:
            assoc_witnesses = [int(relabel[w]) for w in assoc_witnesses]
    for x in range(n):
        if len(set(mul[x].tolist())) != n:
            raise NotCancellative("row %d is not a permutation" % x)
        if len(set(mul[:, x].tolist())) != n:
            raise NotCancellative("column %d is not a permutation" % x)
    if assoc_witnesses is None:
        witnesses = range(n)
    else:
        witnesses = sorted(set(int(w) for w in assoc_witnesses))
        reached = {0}
        frontier = [0]
        while frontier:
            a = frontier.pop()
            for w in witnesses:
                b = int(mul[a, w])
                if b not in reached:
                    reached.add(b)
                    frontier.append(b)
        if len(reached) != n:
            raise NotGenerating("associativity witnesses do not generate")
    for x in witnesses:
        if not np.array_equal(mul[mul[x]], mul[x][mul]):
            y, z = np.argwhere(mul[mul[x]] != mul[x][mul])[0]
            raise NotAssociative("(%d,%d,%d)" % (x, y, z))
    inv = np.empty(n, dtype=np.int64)
    for x in range(n):
        inv[x] = int(np.nonzero(mul[x] == 0)[0][0])
    return Group(mul, inv)


def from_operation(elems, op):
    """Group from abstract elements and a binary operation on them."""
    index = {g: i for i, g in enumerate(elems)}
    table = [[index[op(a, b)] for b in elems] for a in elems]
    return validate_group(table)


def cyclic_group(n):
    return validate_group([[(x + y) % n for y in range(n)] for x in range(n)])


def direct_product(g1, g2):
    """Product group on index pairs, enumerated with the second factor fastest."""
    n2 = g2.n
    a1, b1 = np.divmod(np.arange(g1.n * n2)[:, None], n2)
    a2, b2 = np.divmod(np.arange(g1.n * n2)[None, :], n2)
    mul = g1.mul[a1, a2] * n2 + g2.mul[b1, b2]
    inv = g1.inv[np.arange(g1.n * n2) // n2] * n2 + g2.inv[np.arange(g1.n * n2) % n2]
    return Group(mul, inv)


def semidirect_cyclic(m, k, r):
    """Z_m ⋊ Z_k where the generator of Z_k acts by x ↦ r·x mod m."""
    assert pow(r, k, m) == 1 % m
    elems = [(x, y) for x in range(m) for y in range(k)]

    def op(a, b):
        return ((a[0] + b[0] * pow(r, a[1], m)) % m, (a[1] + b[1]) % k)

    return from_operation(elems, op)


def abelian_group(moduli):
    """Direct sum of cyclic groups Z_{m₁} × … × Z_{m_k}."""
    g = cyclic_group(moduli[0])
    for m in moduli[1:]:
        g = direct_product(g, cyclic_group(m))
    return g


def subgroup_closure(g, gens):
    """Smallest subgroup containing gens (breadth-first closure)."""
    seen = {0}
    frontier = [0]
    for x in gens:
        if x not in seen:
            seen.add(int(x))
            frontier.append(int(x))
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(seen):
                for z in (int(g.mul[x, y]), int(g.mul[y, x]), int(g.inv[x])):
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
        frontier = nxt
    return tuple(sorted(seen))


def center(g):
    mask = (g.mul == g.mul.T).all(axis=1)
    return tuple(np.nonzero(mask)[0].tolist())


def commutators(g, xs, ys):
    """All [x,y] = x⁻¹y⁻¹xy with x in xs, y in ys."""
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    left = g.mul[g.inv[xs][:, None], g.inv[ys][None, :]]
    right = g.mul[xs[:, None], ys[None, :]]
    return set(np.unique(g.mul[left, right]).tolist())


def derived_subgroup(g):
    return subgroup_closure(g, commutators(g, range(g.n), range(g.n)))


def lower_central(g, k):
    """γ_k with γ₁ the derived subgroup: γ_k = [γ_{k−1}, G]."""
    assert k >= 1
    current = derived_subgroup(g)
    for _ in range(k - 1):
        current = subgroup_closure(g, commutators(g, current, range(g.n)))
    return current


def is_abelian(g):
    return np.array_equal(g.mul, g.mul.T)


def is_nilpotent(g):
    current = derived_subgroup(g)
    while len(current) > 1:
        nxt = subgroup_closure(g, commutators(g, current, range(g.n)))
        if len(nxt) == len(current):
            return False
        current = nxt
    return True


def element_orders(g):
    orders = np.zeros(g.n, dtype=np.int64)
    for x in range(g.n):
        acc, k = x, 1
        while acc != 0:
            acc = int(g.mul[acc, x])
            k += 1
        orders[x] = k
    return orders


def power(g, x, k):
    acc = 0
    for _ in range(k):
        acc = int(g.mul[acc, x])
    return acc


def prime_power(n):
    """(p, k) with n = p^k, or None."""
    factors = sympy.factorint(n)
    if len(factors) != 1:
        return None
    (p, k), = factors.items()
    return p, k


def frattini(g):
    """Φ(G) for a p-group: closure of the derived subgroup and all p-th powers."""
    pk = prime_power(g.n)
    if pk is None:
        raise NotPGroup("order %d is not a prime power" % g.n)
    p = pk[0]
    gens = set(derived_subgroup(g))
    gens.update(power(g, x, p) for x in range(g.n))
    return subgroup_closure(g, gens)


def is_normal(g, elems):
    sub = set(elems)
    for x in range(g.n):
        for h in elems:
            if int(g.mul[g.mul[x, h], g.inv[x]]) not in sub:
                return x, h
    return None


def quotient(g, elems):
    """Quotient group by a normal subgroup, with the projection hom.

    Coset representatives are minimal indices; the quotient identity is the
    coset of 0, so no relabeling is ever needed.
    """
    witness = is_normal(g, elems)
    if witness is not None:
        raise NotNormal("conjugate of %d by %d leaves the subgroup" % (witness[1], witness[0]))
    sub = np.asarray(elems, dtype=np.int64)
    coset_min = np.full(g.n, -1, dtype=np.int64)
    for x in range(g.n):
        if coset_min[x] < 0:
            members = g.mul[x, sub]
            coset_min[members] = members.min()
    reps = np.unique(coset_min)
    where = {int(r): i for i, r in enumerate(reps)}
    proj = np.array([where[int(coset_min[x])] for x in range(g.n)], dtype=np.int64)
    table = proj[g.mul[reps[:, None], reps[None, :]]]
    q = validate_group(table)
    return q, Hom(g, q, proj)


def hom_is_multiplicative(hom):
    return np.array_equal(hom.image[hom.source.mul],
                          hom.target.mul[hom.image[:, None], hom.image[None, :]])


def is_automorphism(g, image):
    image = np.asarray(image, dtype=np.int64)
    if image[0] != 0 or len(set(image.tolist())) != g.n:
        return False
    return np.array_equal(image[g.mul], g.mul[image[:, None], image[None, :]])


def kernel(hom):
    return tuple(np.nonzero(hom.image == 0)[0].tolist())


def induced_automorphism(f, hom):
    """Push an automorphism through a quotient projection: f_N(xN) = f(x)N."""
    ker = kernel(hom)
    if sorted(int(f[x]) for x in ker) != list(ker):
        raise NotInvariant("automorphism does not preserve the kernel")
    m = hom.target.n
    image = np.full(m, -1, dtype=np.int64)
    image[hom.image] = hom.image[f]
    assert is_automorphism(hom.target, image)
    return image


def fixed_subgroup(g, f):
    return tuple(np.nonzero(np.asarray(f) == np.arange(g.n))[0].tolist())


def sylow_decomposition(g):
    """[(p, p-Sylow)] for a nilpotent group; the Sylows are the p-power-order parts."""
    if not is_nilpotent(g):
        raise NotNilpotent("lower central series does not reach the identity")
    orders = element_orders(g)
    out = []
    for p in sorted(sympy.factorint(g.n)):
        members = [x for x in range(g.n) if sympy.factorint(int(orders[x])).keys() <= {p}]
        sub = tuple(sorted(members))
        assert sub == subgroup_closure(g, sub)
        out.append((int(p), sub))
    total = 1
    for p, sub in out:
        total *= len(sub)
    assert total == g.n
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            assert set(out[i][1]) & set(out[j][1]) == {0}
    return out


def _order_profile(g):
    orders = element_orders(g)
    profile = {}
    for x in range(g.n):
        profile.setdefault(int(orders[x]), []).append(x)
    return orders, profile


def _close_partial(g, h, pairs):
    """Multiplicative closure of a partial generator map (source, target pairs).

    Returns the closed image dict, or None on a conflict.  The dict covers
    the subgroup generated by the mapped elements, which may be proper.
    """
    image = {0: 0}
    frontier = [0]
    for x, y in pairs:
        if image.get(x, y) != y:
            return None
        if x not in image:
            frontier.append(x)
        image[x] = y
    while frontier:
        nxt = []
        for x in frontier:
            for k in list(image):
                for a, b in ((x, k), (k, x)):
                    z = int(g.mul[a, b])
                    w = int(h.mul[image[a], image[b]])
                    if image.get(z, w) != w:
                        return None
                    if z not in image:
                        image[z] = w
                        nxt.append(z)
        frontier = nxt
    if len(set(image.values())) != len(image):
        return None
    return image


def generating_set(g):
    """Small generating set found greedily by extending the generated subgroup."""
    gens = []
    current = (0,)
    while len(current) < g.n:
        for x in range(g.n):
            if x not in current:
                gens.append(x)
                current = subgroup_closure(g, gens)
                break
    return gens


def _image_search(g, h, gens, src_orders, tgt_profile, cap, collect_all):
    """Backtracking over generator images matching element orders."""
    found = []
    gens = list(gens)

    def rec(i, pairs):
        if i == len(gens):
            image = _close_partial(g, h, pairs)
            if image is not None and len(image) == g.n:
                out = np.empty(g.n, dtype=np.int64)
                for x, y in image.items():
                    out[x] = y
                found.append(out)
                if collect_all and len(found) > cap:
                    raise CapExceeded("more than %d automorphisms" % cap)
                return not collect_all
            return False
        x = gens[i]
        for y in tgt_profile.get(int(src_orders[x]), []):
            nxt = pairs + [(x, y)]
            if _close_partial(g, h, nxt) is None:
                continue
            if rec(i + 1, nxt):
                return True
        return False

    rec(0, [])
    return found


def all_automorphisms(g, gens=None, cap=10 ** 6):
    """Every automorphism of g, by backtracking on images of a generating set."""
    if gens is None:
        gens = generating_set(g)
    elif subgroup_closure(g, gens) != tuple(range(g.n)):
        raise NotGenerating("given set does not generate the group")
    orders, profile = _order_profile(g)
    return _image_search(g, g, gens, orders, profile, cap, collect_all=True)


def group_isomorphic(g1, g2):
    """An isomorphism g1 → g2 as a Hom, or None."""
    if g1.n != g2.n:
        return None
    o1, _ = _order_profile(g1)
    o2, p2 = _order_profile(g2)
    if sorted(o1.tolist()) != sorted(element_orders(g2).tolist()):
        return None
    gens = generating_set(g1)
    found = _image_search(g1, g2, gens, o1, p2, cap=1, collect_all=False)
    if not found:
        return None
    return Hom(g1, g2, found[0])


def radical(n):
    """Product of the distinct prime divisors."""
    assert n >= 1
    out = 1
    for p in sympy.factorint(n):
        out *= int(p)
    return out


def write_group(g):
    lines = ["group %d" % g.n]
    for x in range(g.n):
        lines.append(" ".join(str(int(v)) for v in g.mul[x]))
    return "\n".join(lines) + "\n"


def read_group(text):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "group":
        raise GroupError("expected 'group n' header")
    n = int(head[1])
    table = [[int(v) for v in ln.split()] for ln in lines[1:n + 1]]
    return validate_group(table)
