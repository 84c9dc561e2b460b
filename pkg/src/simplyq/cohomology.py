"""Constant quandle cocycles, extensions Q ×_θ A, and H²(Q, Z_q).

A constant cocycle is an n×n matrix θ over a value group satisfying the
cocycle condition θ[x*y][x*z]·θ[x][z] = θ[x][y*z]·θ[y][z] and the quandle
condition θ[x][x] = 1.  It twists the direct product into the extension
(x,a)*(y,b) = (x*y, θ[x][y]·b), and θ is a coboundary δγ = γ[x*y]·γ[y]⁻¹
exactly when that extension splits back into the trivial cover.

For a prime modulus the cocycles form an F_q vector space, so triviality
and the size of H² = Z²/B² reduce to exact linear algebra (simplyq.gf).
"""

import os
from collections import deque
from dataclasses import dataclass

import numpy as np
import sympy

from . import gf
from . import groups as gr
from . import quandles as qd

GROUP_VALUE_CAP = 625


def _dense_limit():
    return int(os.environ.get("SQ_SOLVER_DENSE_LIMIT", "2500"))


class CocycleError(ValueError):
    pass


class CCViolation(CocycleError):
    def __init__(self, x, y, z):
        self.triple = (x, y, z)
        super().__init__(f"cocycle condition fails at triple {(x, y, z)}")


class QCViolation(CocycleError):
    def __init__(self, x):
        self.point = x
        super().__init__(f"diagonal entry at {x} is not the identity")


class NotMorphism(CocycleError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"map is not a quandle morphism at pair {(x, y)}")


@dataclass(frozen=True, eq=False)
class AbelianCocycle:
    """θ with values in Z_q (additive, q prime)."""

    quandle: qd.QuandleTable
    q: int
    theta: np.ndarray


@dataclass(frozen=True, eq=False)
class GroupCocycle:
    """θ with values in a finite group, stored as element indices."""

    quandle: qd.QuandleTable
    group: gr.Group
    theta: np.ndarray


@dataclass(frozen=True, eq=False)
class Coboundary:
    """γ: Q -> values with δγ[x][y] = γ[x*y]·γ[y]⁻¹."""

    quandle: qd.QuandleTable
    target: object
    gamma: np.ndarray


def _cc_sides(star, theta, pair):
    """Both sides of the cocycle condition for all triples, as (n,n,n) arrays.

    `pair(a, b)` composes two same-shape arrays of values.
    """
    n = len(star)
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    sxy, sxz, syz = star[x, y], star[x, z], star[y, z]
    lhs = pair(theta[sxy, sxz], np.broadcast_to(theta[x, z], (n, n, n)))
    rhs = pair(theta[x, syz], np.broadcast_to(theta[y, z], (n, n, n)))
    return lhs, rhs


def validate_cocycle(q, matrix, target):
    """Check (QC) and every (CC) triple; target is a prime or a Group."""
    theta = np.asarray(matrix, dtype=np.int64)
    if theta.shape != (q.n, q.n):
        raise CocycleError(f"matrix shape {theta.shape} does not match |Q|={q.n}")
    if isinstance(target, gr.Group):
        if target.n > GROUP_VALUE_CAP:
            raise qd.CapExceeded(f"value group larger than {GROUP_VALUE_CAP}")
        if theta.min() < 0 or theta.max() >= target.n:
            raise CocycleError("entry out of range for the value group")
        identity = 0
        lhs, rhs = _cc_sides(q.star, theta, lambda a, b: target.mul[a, b])
    else:
        modulus = int(target)
        assert sympy.isprime(modulus), "abelian values must have prime modulus"
        theta = theta % modulus
        identity = 0
        lhs, rhs = _cc_sides(q.star, theta, lambda a, b: (a + b) % modulus)
    diag = np.nonzero(np.diagonal(theta) != identity)[0]
    if len(diag):
        raise QCViolation(int(diag[0]))
    bad = np.nonzero(lhs != rhs)
    if len(bad[0]):
        raise CCViolation(int(bad[0][0]), int(bad[1][0]), int(bad[2][0]))
    if isinstance(target, gr.Group):
        return GroupCocycle(quandle=q, group=target, theta=theta)
    return AbelianCocycle(quandle=q, q=modulus, theta=theta)


def trivial_cocycle(q, target):
    """The constant-identity cocycle 𝟙."""
    return validate_cocycle(q, np.zeros((q.n, q.n), dtype=np.int64), target)


def _values(c):
    """(size, scalar op, scalar inverse) of the value group of a cocycle."""
    if isinstance(c, AbelianCocycle):
        m = c.q
        return m, lambda a, b: (a + b) % m, lambda a: (-a) % m
    g = c.group
    return g.n, lambda a, b: int(g.mul[a, b]), lambda a: int(g.inv[a])


def extension(q, c):
    """Q ×_θ A on points (x,a) ↦ x·|A| + a, with the fiber partition ker p."""
    m, _, _ = _values(c)
    pts = np.arange(q.n * m)
    x, a = pts // m, pts % m
    base = q.star[x[:, None], x[None, :]]
    tw = c.theta[x[:, None], x[None, :]]
    if isinstance(c, AbelianCocycle):
        fiber = (tw + a[None, :]) % m
    else:
        fiber = c.group.mul[tw, a[None, :]]
    table = qd.validate_left_quasigroup(base * m + fiber)
    return table, qd.Partition(ids=x, count=q.n)


def is_trivial_via_orbit(q, c):
    """θ ~ 𝟙 iff every orbit of the extension has size |Q| (Q connected)."""
    if not q.is_connected:
        raise qd.NotConnected("orbit criterion needs a connected base")
    e, _ = extension(q, c)
    orbits = qd.orbit_partition(e.n, e.star)
    return bool((np.bincount(orbits.ids) == q.n).all())


def trivialize(q, c):
    """γ with δγ = θ, or None when θ is not a coboundary (Q connected).

    Sweeps breadth-first from point 0 accumulating the running products
    Θ_{x*y} = θ[x][y]·Θ_y and Θ_{x\\y} = θ[x][x\\y]⁻¹·Θ_y; any inconsistent
    revisit certifies nontriviality.
    """
    if not q.is_connected:
        raise qd.NotConnected("trivialization sweeps a connected quandle")
    m, op, inv = _values(c)
    theta = c.theta
    gamma = np.zeros(q.n, dtype=np.int64)
    seen = np.zeros(q.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        y = queue.popleft()
        for x in range(q.n):
            z = int(q.star[x, y])
            val = op(int(theta[x, y]), int(gamma[y]))
            if not seen[z]:
                seen[z] = True
                gamma[z] = val
                queue.append(z)
            elif int(gamma[z]) != val:
                return None
        for x in range(q.n):
            z = int(q.ldiv[x, y])
            val = op(inv(int(theta[x, z])), int(gamma[y]))
            if not seen[z]:
                seen[z] = True
                gamma[z] = val
                queue.append(z)
            elif int(gamma[z]) != val:
                return None
    assert seen.all()
    if isinstance(c, AbelianCocycle):
        assert ((gamma[q.star] - gamma[None, :]) % m == theta).all()
        return Coboundary(quandle=q, target=c.q, gamma=gamma)
    g = c.group
    assert (g.mul[gamma[q.star], g.inv[gamma[None, :]]] == theta).all()
    return Coboundary(quandle=q, target=g, gamma=gamma)


def coboundary_cocycle(q, target, gamma):
    """δγ as a validated cocycle."""
    gamma = np.asarray(gamma, dtype=np.int64)
    if isinstance(target, gr.Group):
        theta = target.mul[gamma[q.star], target.inv[gamma[None, :]]]
    else:
        theta = (gamma[q.star] - gamma[None, :]) % int(target)
    return validate_cocycle(q, theta, target)


def u_normalize(q, c, u):
    """The cohomologous cocycle θ'[x][y] = θ[xy/u][u]⁻¹·θ[x][y]·θ[y/u][u].

    Right division by u exists because Q is latin; afterwards the whole
    u-column of θ' is the identity.
    """
    if not q.is_latin:
        raise qd.NotLatin("u-normalization divides by u on the right")
    rdiv_u = np.argsort(q.star[:, u])
    tvec = c.theta[rdiv_u, u]
    if isinstance(c, AbelianCocycle):
        theta = (c.theta - tvec[q.star] + tvec[None, :]) % c.q
        out = AbelianCocycle(quandle=q, q=c.q, theta=theta)
    else:
        g = c.group
        theta = g.mul[g.mul[g.inv[tvec[q.star]], c.theta], tvec[None, :]]
        out = GroupCocycle(quandle=q, group=g, theta=theta)
    assert (out.theta[:, u] == 0).all()
    return out


def is_trivial_latin(q, c, u=0):
    """θ ~ 𝟙 iff the u-normalization is identically 𝟙 (Q latin)."""
    return not u_normalize(q, c, u).theta.any()


def split_cocycle(q, rho, group, kind="core", f=None):
    """θ(ρ)[x][y] = ρ(x)·ρ(y)⁻¹ for a morphism ρ into Core(G) or Conj_f(G)."""
    from . import constructions as cn

    rho = np.asarray(rho, dtype=np.int64)
    assert rho.shape == (q.n,) and rho.min() >= 0 and rho.max() < group.n
    if kind == "core":
        target = cn.core(group)
    elif kind == "twisted":
        target = cn.conj_f(group, np.arange(group.n) if f is None else f)
    else:
        raise CocycleError(f"unknown split kind {kind!r}")
    bad = np.nonzero(rho[q.star] != target.star[rho[:, None], rho[None, :]])
    if len(bad[0]):
        raise NotMorphism(int(bad[0][0]), int(bad[1][0]))
    theta = group.mul[rho[:, None], group.inv[rho][None, :]]
    return validate_cocycle(q, theta, group)


def fiber_congruence(e, modulus, subgroup):
    """The congruence (x,a) ~ (y,b) iff x = y and b−a ∈ N, for N ≤ Z_q."""
    sub = sorted(int(s) % modulus for s in subgroup)
    assert sub and sub[0] == 0, "a subgroup contains 0"
    member = np.zeros(modulus, dtype=bool)
    member[sub] = True
    assert member[(np.array(sub)[:, None] + np.array(sub)[None, :]) % modulus].all()
    coset = np.array(
        [min((a + s) % modulus for s in sub) for a in range(modulus)], dtype=np.int64
    )
    pts = np.arange(e.n)
    return qd.normalize_partition((pts // modulus) * modulus + coset[pts % modulus])


# ---------------------------------------------------------------------------
# The F_q linear system for Z²(Q, Z_q)
# ---------------------------------------------------------------------------
#
# Unknowns are the n² entries θ[x][y] indexed x·n+y; (QC) pins the diagonal
# to zero and every triple (x,y,z), y≠z, contributes the additive relation
#   θ[xy][xz] + θ[x][z] − θ[x][yz] − θ[y][z] = 0.
# Rows are canonicalized and deduplicated, then swallowed by a scaled
# union-find: a surviving row with one term forces a class to zero, one with
# two terms merges two classes up to a scalar.  What survives is a residual
# system on the classes, solved densely below SQ_SOLVER_DENSE_LIMIT unknowns
# and by sparse lowest-column pivoting above it.

_GONE = np.iinfo(np.int64).max


def _cc_rows(q, modulus):
    n = q.n
    star = q.star.astype(np.int64)
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    i1 = star[x, y] * n + star[x, z]
    i2 = np.broadcast_to(x * n + z, (n, n, n))
    i3 = x * n + star[y, z]
    i4 = np.broadcast_to(y * n + z, (n, n, n))
    keep = np.broadcast_to(y != z, (n, n, n)).ravel()
    idx = np.stack(np.broadcast_arrays(i1, i2, i3, i4), axis=-1).reshape(-1, 4)
    idx = np.ascontiguousarray(idx[keep])
    coef = np.tile(
        np.array([1, 1, modulus - 1, modulus - 1], dtype=np.int64), (len(idx), 1)
    )
    return idx, coef


def _sort4(idx, coef):
    """Row-wise sort of 4-slot rows by unknown index (sorting network)."""
    for i, j in ((0, 1), (2, 3), (0, 2), (1, 3), (1, 2)):
        a, b = idx[:, i], idx[:, j]
        swap = a > b
        idx[:, i], idx[:, j] = np.where(swap, b, a), np.where(swap, a, b)
        ca, cb = coef[:, i], coef[:, j]
        coef[:, i], coef[:, j] = np.where(swap, cb, ca), np.where(swap, ca, cb)


def _merge_terms(idx, coef, modulus):
    """Sort each ≤4-term row, combine equal unknowns, blank dead slots."""
    _sort4(idx, coef)
    for j in range(1, idx.shape[1]):
        same = (idx[:, j] == idx[:, j - 1]) & (idx[:, j] != _GONE)
        coef[:, j] = np.where(same, coef[:, j] + coef[:, j - 1], coef[:, j])
        coef[:, j - 1] = np.where(same, 0, coef[:, j - 1])
    coef %= modulus
    idx[coef == 0] = _GONE
    _sort4(idx, coef)
    return idx, coef


def _dedup_rows(idx, coef, modulus):
    """Scale each row to leading coefficient 1, then drop exact duplicates."""
    live = (idx != _GONE).any(axis=1)
    idx, coef = idx[live], coef[live]
    if not len(idx):
        return idx, coef
    inv_t = np.array([0] + [pow(c, -1, modulus) for c in range(1, modulus)])
    coef = coef * inv_t[coef[:, 0]][:, None] % modulus
    gone = idx == _GONE
    packed = np.where(gone, _GONE, np.where(gone, 0, idx) * modulus + coef)
    order = np.lexsort(packed.T[::-1])
    packed = packed[order]
    fresh = np.ones(len(packed), dtype=bool)
    fresh[1:] = (packed[1:] != packed[:-1]).any(axis=1)
    keep = order[fresh]
    return idx[keep], coef[keep]


def _resolve(parent, scale, modulus):
    """Flatten the union-find forest; θ_i = scale_i · θ_{parent_i} throughout."""
    while True:
        grand = parent[parent]
        if np.array_equal(grand, parent):
            return parent, scale
        scale = scale * scale[parent] % modulus
        parent = grand


def _solve_cc(q, modulus, forced_zero):
    """Basis of {θ: (CC), (QC), θ.flat[i]=0 for i in forced_zero} as matrices."""
    n = q.n
    idx, coef = _cc_rows(q, modulus)
    idx, coef = _dedup_rows(*_merge_terms(idx, coef, modulus), modulus)
    parent = np.arange(n * n, dtype=np.int64)
    scale = np.ones(n * n, dtype=np.int64)
    zero = np.zeros(n * n, dtype=bool)
    zero[np.arange(n) * (n + 1)] = True
    zero[list(forced_zero)] = True

    def find(i):
        s = 1
        while parent[i] != i:
            s = s * scale[i] % modulus
            i = parent[i]
        return int(i), s

    while True:
        parent, scale = _resolve(parent, scale, modulus)
        live = idx != _GONE
        safe = np.where(live, idx, 0)
        hot = (live & ((parent[safe] != idx) | zero[parent[safe]])).any(axis=1)
        if hot.any():
            hidx, hcoef = idx[hot], coef[hot]
            hlive = hidx != _GONE
            hsafe = np.where(hlive, hidx, 0)
            gone = ~hlive | zero[parent[hsafe]]
            hcoef = np.where(gone, 0, hcoef * scale[hsafe] % modulus)
            hidx = np.where(gone, _GONE, parent[hsafe])
            hidx, hcoef = _merge_terms(hidx, hcoef, modulus)
            idx = np.concatenate([idx[~hot], hidx])
            coef = np.concatenate([coef[~hot], hcoef])
        weight = (idx != _GONE).sum(axis=1)
        stay = weight > 0
        idx, coef, weight = idx[stay], coef[stay], weight[stay]
        small = np.nonzero(weight <= 2)[0]
        if not len(small):
            break
        for r in small:
            a, ca = find(idx[r, 0])
            if weight[r] == 1:
                zero[a] = True
                continue
            b, cb = find(idx[r, 1])
            ca = int(ca * coef[r, 0]) % modulus
            cb = int(cb * coef[r, 1]) % modulus
            if zero[a] or zero[b]:
                zero[a] = zero[b] = True
            elif a == b:
                if (ca + cb) % modulus:
                    zero[a] = True
            else:
                parent[a] = b
                scale[a] = (modulus - cb) * pow(ca, -1, modulus) % modulus
        keep = weight > 2
        idx, coef = idx[keep], coef[keep]

    parent, scale = _resolve(parent, scale, modulus)
    zero = zero[parent]
    roots = np.unique(parent[~zero]) if not zero.all() else np.empty(0, np.int64)
    cls = np.searchsorted(roots, parent)
    cls[zero] = 0  # masked out later; keep indexable
    if len(idx):
        ridx = np.where(idx == _GONE, _GONE, cls[np.where(idx == _GONE, 0, idx)])
    else:
        ridx = idx
    if not len(roots):
        class_basis = []
    elif len(roots) <= _dense_limit() and len(idx) * len(roots) <= 5 * 10**7:
        system = np.zeros((max(len(idx), 1), len(roots)), dtype=np.int64)
        rows = np.repeat(np.arange(len(idx)), 4)
        live = ridx.ravel() != _GONE
        system[rows[live], ridx.ravel()[live]] = coef.ravel()[live]
        class_basis = gf.nullspace_dense(system, modulus)
    else:
        solver = gf.SparseSolver(modulus)
        for r in range(len(idx)):
            solver.add_row(
                {int(c): int(v) for c, v in zip(ridx[r], coef[r]) if c != _GONE}
            )
        class_basis = solver.nullspace_basis(len(roots))

    out = []
    for vec in class_basis:
        flat = np.where(zero, 0, scale * vec[cls] % modulus)
        out.append(flat.reshape(n, n))
    return out


def _tree_slots(q):
    """Entry slots θ[x][y] of a breadth-first spanning tree rooted at 0.

    Forcing these n−1 entries to zero picks one representative per
    cohomology class: the Θ-recursion along tree edges turns any cocycle
    into such a representative, and a coboundary δγ vanishing on a spanning
    tree has γ constant, hence δγ = 0.  So Z² = {tree-normalized} ⊕ B².
    """
    n = q.n
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    slots = []
    queue = deque([0])
    while queue:
        y = queue.popleft()
        for x in range(n):
            child = int(q.star[x, y])
            if not seen[child]:
                seen[child] = True
                slots.append(x * n + y)
                queue.append(child)
    assert seen.all(), "spanning tree needs a connected quandle"
    return np.array(slots, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class CocycleSpace:
    """Z²(Q, Z_q) with its coboundary subspace dimension."""

    quandle: qd.QuandleTable
    q: int
    z2_dim: int
    b2_dim: int
    basis: list

    @property
    def h2_dim(self):
        return self.z2_dim - self.b2_dim


def _canonical_basis(vectors, modulus):
    if not vectors:
        return [], 0
    stack = np.array([v.ravel() for v in vectors], dtype=np.int64)
    red, pivots = gf.rref_dense(stack, modulus)
    shape = vectors[0].shape
    return [row.reshape(shape) for row in red], len(pivots)


def cocycle_space(q, modulus):
    """dim Z², dim B² and an echelonized basis of Z²(Q, Z_q)."""
    assert sympy.isprime(modulus), "abelian values must have prime modulus"
    n = q.n
    b2 = n - qd.orbit_partition(n, q.star).count
    if q.is_connected:
        normalized = _solve_cc(q, modulus, forced_zero=_tree_slots(q))
        deltas = []
        for i in range(1, n):
            gamma = np.zeros(n, dtype=np.int64)
            gamma[i] = 1
            deltas.append((gamma[q.star] - gamma[None, :]) % modulus)
        basis, rank = _canonical_basis(deltas + normalized, modulus)
        assert rank == b2 + len(normalized), "normalized part must be independent"
        return CocycleSpace(quandle=q, q=modulus, z2_dim=rank, b2_dim=b2, basis=basis)
    solutions = _solve_cc(q, modulus, forced_zero=())
    basis, rank = _canonical_basis(solutions, modulus)
    assert rank == len(solutions)
    return CocycleSpace(quandle=q, q=modulus, z2_dim=rank, b2_dim=b2, basis=basis)


def h2_dim(q, modulus):
    """dim H²(Q, Z_q) = dim Z² − dim B², with dim B² = |Q| − #orbits."""
    if not q.is_connected:
        raise qd.NotConnected("H² dimension is computed for connected quandles")
    return len(_solve_cc(q, modulus, forced_zero=_tree_slots(q)))


# ---------------------------------------------------------------------------
# File format: header "cocycle n q", then n rows of n residues.
# ---------------------------------------------------------------------------


def write_cocycle(path, c):
    assert isinstance(c, AbelianCocycle), "only abelian cocycles have a file form"
    lines = [f"cocycle {c.quandle.n} {c.q}"]
    lines += [" ".join(str(int(v)) for v in row) for row in c.theta]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_cocycle(path, q):
    with open(path) as fh:
        words = fh.read().split()
    if len(words) < 3 or words[0] != "cocycle":
        raise CocycleError("expected a 'cocycle n q' header")
    n, modulus = int(words[1]), int(words[2])
    if n != q.n:
        raise CocycleError(f"cocycle is over {n} points, quandle has {q.n}")
    if len(words) != 3 + n * n:
        raise CocycleError("entry count does not match the header")
    theta = np.array([int(w) for w in words[3:]], dtype=np.int64).reshape(n, n)
    return validate_cocycle(q, theta, modulus)
