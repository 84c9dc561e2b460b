"""Catalog of groups of order p³ and p⁴ with their automorphism families.

Order-p⁴ groups are realized on exponent 4-vectors (a₁^{e₁}a₂^{e₂}a₃^{e₃}a₄^{e₄}
with digits e_i, point index e₁p³+e₂p²+e₃p+e₄) by collected multiplication
formulas; associativity is certified against the four generators, which
generate every catalog group.  Automorphisms are given by generator images;
the images of relation-defined generators (a₃, a₄) are derived in the table.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

from . import groups as gr


class BadPrime(ValueError):
    pass


class BadResidue(ValueError):
    pass


class BadParams(ValueError):
    pass


class NotAutomorphism(RuntimeError):
    pass


class ReduciblePolynomial(ValueError):
    pass


CATALOG_IDS = (3, 4, 6, 7, 8, 9, 10, 12, 13, 14)
GOOD_IDS = (3, 7, 12)  # ids whose automorphism family contains good pairs


def _check_prime(p):
    if p == 2 or not sympy.isprime(p):
        raise BadPrime(f"odd prime required, got {p}")


def least_nonresidue(p):
    for w in range(2, p):
        if sympy.legendre_symbol(w, p) == -1:
            return w
    raise BadResidue(f"no quadratic non-residue mod {p}")


def _digits4(p):
    n = p**4
    return np.stack(np.unravel_index(np.arange(n), (p, p, p, p)), axis=0)


def _p4_table(i, p, w):
    d = _digits4(p)
    x1, x2, x3, x4 = (c[:, None] for c in d)
    y1, y2, y3, y4 = (c[None, :] for c in d)
    t = x2 * y1
    half = (y1 * (y1 - 1)) // 2
    if i == 3:
        s1 = x1 + y1
        z = (s1 % p, (x2 + y2) % p, (x3 + y3 + t) % p, (x4 + y4 + s1 // p) % p)
    elif i == 4:
        s1, s2 = x1 + y1, x2 + y2
        z = (s1 % p, s2 % p, (x3 + y3 + s1 // p) % p, (x4 + y4 + t + s2 // p) % p)
    elif i == 6:
        s1 = x1 + y1
        s3 = x3 + y3 + s1 // p
        z = (s1 % p, (x2 + y2) % p, s3 % p, (x4 + y4 + t + s3 // p) % p)
    elif i == 7:
        z = ((x1 + y1) % p, (x2 + y2) % p, (x3 + y3 + t) % p,
             (x4 + y4 + x3 * y1 + x2 * half) % p)
    elif i == 8:
        s1 = x1 + y1
        z = (s1 % p, (x2 + y2) % p, (x3 + y3 + t) % p,
             (x4 + y4 + x3 * y1 + x2 * half + s1 // p) % p)
    elif i == 9:
        s2 = x2 + y2
        z = ((x1 + y1) % p, s2 % p, (x3 + y3 + t) % p,
             (x4 + y4 + x3 * y1 + x2 * half + s2 // p) % p)
    elif i == 10:
        s2 = x2 + y2
        z = ((x1 + y1) % p, s2 % p, (x3 + y3 + t) % p,
             (x4 + y4 + x3 * y1 + x2 * half + w * (s2 // p)) % p)
    elif i == 12:
        z = ((x1 + y1) % p, (x2 + y2) % p, (x3 + y3) % p, (x4 + y4 + t) % p)
    elif i == 13:
        s1 = x1 + y1
        z = (s1 % p, (x2 + y2) % p, (x3 + y3) % p, (x4 + y4 + t + s1 // p) % p)
    elif i == 14:
        s3 = x3 + y3
        z = ((x1 + y1) % p, (x2 + y2) % p, s3 % p, (x4 + y4 + t + s3 // p) % p)
    else:
        raise BadParams(f"unknown catalog id {i}")
    return np.ravel_multi_index(z, (p, p, p, p)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class CatalogGroup:
    gid: int
    p: int
    group: gr.Group
    gens: tuple  # indices of a₁, a₂, a₃, a₄
    w: int = None


@lru_cache(maxsize=32)
def catalog_group(i, p, w=None):
    """Order-p⁴ group number i; for i=10, w defaults to the least non-residue."""
    _check_prime(p)
    if i not in CATALOG_IDS:
        raise BadParams(f"catalog id must be one of {CATALOG_IDS}")
    if i == 10:
        w = least_nonresidue(p) if w is None else int(w)
        if sympy.legendre_symbol(w, p) != -1:
            raise BadResidue(f"{w} is a quadratic residue mod {p}")
    gens = (p**3, p**2, p, 1)
    group = gr.validate_group(_p4_table(i, p, w), assoc_witnesses=gens)
    return CatalogGroup(gid=i, p=p, group=group, gens=gens, w=w)


def order_p3_group(kind, p):
    """The order-p³ groups used by the cover search."""
    _check_prime(p)
    if kind == "cyclic":
        return gr.cyclic_group(p**3)
    if kind == "Zp2xZp":
        return gr.abelian_group([p * p, p])
    if kind == "elem_abelian":
        return gr.abelian_group([p, p, p])
    if kind == "heisenberg":
        return heisenberg(p)
    if kind == "modular":
        return gr.semidirect_cyclic(p * p, p, 1 + p)
    raise BadParams(f"unknown kind {kind!r}")


@lru_cache(maxsize=8)
def heisenberg(p):
    """Exponent-p Heisenberg group on triples (a,b,c), index a·p²+b·p+c."""
    _check_prime(p)
    n = p**3
    d = np.stack(np.unravel_index(np.arange(n), (p, p, p)), axis=0)
    a1, b1, c1 = (c[:, None] for c in d)
    a2, b2, c2 = (c[None, :] for c in d)
    z = ((a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p)
    return gr.validate_group(np.ravel_multi_index(z, (p, p, p)).astype(np.int64))


def heisenberg_automorphism(p, m):
    """Lift of an invertible 2×2 matrix on the Frattini quotient to Heis(p).

    (a, x, z) ↦ (m₁₁a+m₁₂x, m₂₁a+m₂₂x, det·z + αa² + βax + γx²) with the
    quadratic correction forced by the homomorphism law (odd p).
    """
    _check_prime(p)
    (m11, m12), (m21, m22) = [[v % p for v in row] for row in m]
    det = (m11 * m22 - m12 * m21) % p
    if det == 0:
        raise BadParams("matrix is singular mod p")
    inv2 = (p + 1) // 2
    al, be, ga = m11 * m21 * inv2 % p, m12 * m21 % p, m12 * m22 * inv2 % p
    n = p**3
    a, x, z = np.unravel_index(np.arange(n), (p, p, p))
    image = np.ravel_multi_index(
        (
            (m11 * a + m12 * x) % p,
            (m21 * a + m22 * x) % p,
            (det * z + al * a * a + be * a * x + ga * x * x) % p,
        ),
        (p, p, p),
    ).astype(np.int64)
    assert gr.is_automorphism(heisenberg(p), image)
    return image


def heis_quandle_automorphism(kind, params, p):
    """Heisenberg automorphisms of the diagonal/Jordan/companion families."""
    _check_prime(p)
    if kind == "Dt":
        b, c = (v % p for v in params)
        if not (2 <= b <= c <= p - 1):
            raise BadParams("need 1 < b <= c < p")
        m = [[b, 0], [0, c]]
    elif kind == "Gt":
        c = params[0] % p
        if not 2 <= c <= p - 1:
            raise BadParams("need 1 < c < p")
        m = [[c, 1], [0, c]]
    elif kind == "Ht":
        b1, b0 = (v % p for v in params)
        disc = (b1 * b1 - 4 * b0) % p
        if disc == 0 or sympy.legendre_symbol(disc, p) == 1:
            raise ReduciblePolynomial("x² + b1·x + b0 splits mod p")
        m = [[0, 1], [(-b0) % p, (-b1) % p]]
    else:
        raise BadParams(f"unknown family {kind!r}")
    return heisenberg_automorphism(p, m)


# --- automorphism families of the catalog groups ------------------------------

def _family_spec(i, p):
    """(param names, per-param value ranges, admissibility predicate)."""
    units = list(range(1, p))
    full = list(range(p))
    sign = [1, p - 1]
    if i == 3 or i == 7:
        return (("u1", "u2", "u3", "u4", "v2", "v3", "v4"),
                (units, full, full, full, units, full, full), None)
    if i == 4:
        return (("u2", "u3", "u4", "v2", "v3", "v4"),
                (full, full, full, units, full, full), None)
    if i == 6:
        return (("u1", "u2", "u3", "u4", "v4"),
                (units, full, full, full, full), None)
    if i == 8:
        return (("u1", "u2", "u3", "u4", "v3", "v4"),
                (units, full, full, full, full, full), None)
    if i in (9, 10):
        return (("u1", "u3", "u4", "v2", "v3", "v4"),
                (sign, full, full, units, full, full), None)
    if i == 12:
        def invertible(t):
            return (t[0] * t[5] - t[4] * t[1]) % p != 0
        return (("u1", "u2", "u3", "u4", "v1", "v2", "v3", "v4", "w3", "w4"),
                (full, full, full, full, full, full, full, full, units, full),
                invertible)
    if i == 13:
        return (("u1", "u2", "u3", "u4", "v3", "v4", "w3", "w4"),
                (units, full, full, full, full, full, units, full), None)
    if i == 14:
        def invertible(t):
            return (t[0] * t[4] - t[3] * t[1]) % p != 0
        return (("u1", "u2", "u4", "v1", "v2", "v4", "w4"),
                (full, full, full, full, full, full, full), invertible)
    raise BadParams(f"unknown catalog id {i}")


def _generator_images(i, p, params, cat):
    """Indices of φ(a₁..a₄); relation-defined generators derived in the table."""
    mul, inv = cat.group.mul, cat.group.inv

    def idx(e1, e2, e3, e4):
        return ((e1 % p) * p + e2 % p) * p * p + (e3 % p) * p + e4 % p

    def power(x, k):
        acc = 0
        for _ in range(k):
            acc = int(mul[acc, x])
        return acc

    def comm(x, y):
        return int(mul[inv[x], mul[inv[y], mul[x, y]]])

    t = dict(zip(_family_spec(i, p)[0], params))
    if i == 3:
        fa1 = idx(t["u1"], t["u2"], t["u3"], t["u4"])
        fa2 = idx(0, t["v2"], t["v3"], t["v4"])
        return fa1, fa2, comm(fa2, fa1), power(fa1, p)
    if i == 4:
        fa1 = idx(1, t["u2"], t["u3"], t["u4"])
        fa2 = idx(0, t["v2"], t["v3"], t["v4"])
        return fa1, fa2, power(fa1, p), power(fa2, p)
    if i == 6:
        fa1 = idx(t["u1"], t["u2"], t["u3"], t["u4"])
        fa2 = idx(0, 1, 0, t["v4"])
        fa3 = power(fa1, p)
        return fa1, fa2, fa3, power(fa3, p)
    if i == 7:
        fa1 = idx(t["u1"], t["u2"], t["u3"], t["u4"])
        fa2 = idx(0, t["v2"], t["v3"], t["v4"])
        fa3 = comm(fa2, fa1)
        return fa1, fa2, fa3, comm(fa3, fa1)
    if i == 8:
        fa1 = idx(t["u1"], t["u2"], t["u3"], t["u4"])
        fa2 = idx(0, pow(t["u1"], -1, p), t["v3"], t["v4"])
        return fa1, fa2, comm(fa2, fa1), power(fa1, p)
    if i in (9, 10):
        fa1 = idx(t["u1"], 0, t["u3"], t["u4"])
        fa2 = idx(0, t["v2"], t["v3"], t["v4"])
        fa3 = comm(fa2, fa1)
        fa4 = power(fa2, p)
        if i == 10:
            fa4 = power(fa4, pow(cat.w, -1, p))
        return fa1, fa2, fa3, fa4
    if i == 12:
        fa1 = idx(t["u1"], t["u2"], t["u3"], t["u4"])
        fa2 = idx(t["v1"], t["v2"], t["v3"], t["v4"])
        return fa1, fa2, idx(0, 0, t["w3"], t["w4"]), comm(fa2, fa1)
    if i == 13:
        fa1 = idx(t["u1"], t["u2"], t["u3"], t["u4"])
        fa2 = idx(0, 1, t["v3"], t["v4"])
        return fa1, fa2, idx(0, 0, t["w3"], t["w4"]), power(fa1, p)
    if i == 14:
        fa1 = idx(t["u1"], t["u2"], 0, t["u4"])
        fa2 = idx(t["v1"], t["v2"], 0, t["v4"])
        det = t["u1"] * t["v2"] - t["v1"] * t["u2"]
        return fa1, fa2, idx(0, 0, det, t["w4"]), comm(fa2, fa1)
    raise BadParams(f"unknown catalog id {i}")


def _image_from_gen_images(cat, gen_images):
    p, mul = cat.p, cat.group.mul
    d = _digits4(p)
    powers = []
    for base in gen_images:
        rows = [0]
        for _ in range(p - 1):
            rows.append(int(mul[rows[-1], base]))
        powers.append(np.array(rows, dtype=np.int64))
    img = mul[mul[mul[powers[0][d[0]], powers[1][d[1]]], powers[2][d[2]]],
              powers[3][d[3]]]
    return img


def _is_automorphism_fast(cat, image):
    """Multiplicativity on generator rows plus trivial kernel."""
    mul = cat.group.mul
    if int((image == 0).sum()) != 1 or image[0] != 0:
        return False
    for g in cat.gens:
        if not np.array_equal(image[mul[g]], mul[int(image[g])][image]):
            return False
    return True


def catalog_automorphism(i, p, params, w=None):
    """The published automorphism of G_i determined by the parameter tuple."""
    cat = catalog_group(i, p, w)
    names, ranges, extra = _family_spec(i, p)
    params = tuple(int(v) % p for v in params)
    if len(params) != len(names):
        raise BadParams(f"expected params {names}")
    for v, rng in zip(params, ranges):
        if v not in rng:
            raise BadParams(f"parameter {v} outside range")
    if extra is not None and not extra(params):
        raise BadParams("parameters violate the family's nonvanishing constraint")
    image = _image_from_gen_images(cat, _generator_images(i, p, params, cat))
    if not _is_automorphism_fast(cat, image):
        raise NotAutomorphism(f"family {i} parameters {params}")
    return image


def is_cover_seed(g, image):
    """Fix(f_Φ)=1, Fix(f) ≤ Z(G)∩γ₁(G), |Fix(f)| = p, computed directly."""
    pk = gr.prime_power(g.n)
    if pk is None:
        raise gr.NotPGroup(f"order {g.n} is not a prime power")
    p = pk[0]
    image = np.asarray(image, dtype=np.int64)
    phi = gr.frattini(g)
    quot, proj = gr.quotient(g, phi)
    induced = gr.induced_automorphism(image, proj)
    if int((induced == np.arange(quot.n)).sum()) != 1:
        return False
    fixed = np.nonzero(image == np.arange(g.n))[0]
    if len(fixed) != p:
        return False
    allowed = set(gr.center(g)) & set(gr.derived_subgroup(g))
    return set(fixed.tolist()) <= allowed


def _closed_form(i, p, cols):
    """Vectorized closed-form cover-seed predicate per catalog id."""
    if i == 3:
        u1, v2 = cols["u1"], cols["v2"]
        return (u1 * v2 % p == 1) & (u1 % p != 1) & (v2 % p != 1)
    if i == 7:
        u1, v2 = cols["u1"], cols["v2"]
        return (u1 * u1 * v2 % p == 1) & (u1 % p != 1) & (v2 % p != 1)
    if i == 12:
        det = (cols["u1"] * cols["v2"] - cols["v1"] * cols["u2"]) % p
        return (det == 1) & ((cols["u1"] + cols["v2"]) % p != 2) & (cols["w3"] % p != 1)
    shape = next(iter(cols.values())).shape
    return np.zeros(shape, dtype=bool)


class _FamilyChecker:
    """Batched good-condition evaluation for one catalog group.

    Soundness rests on certificates extracted from the table at init time:

    * The digit normal form a₁^{e₁}a₂^{e₂}a₃^{e₃}a₄^{e₄} gives a polycyclic
      presentation with relations a_i^p = v_i and a_j·a_i = a_i·a_j·w_{ij}
      (i<j), where v_i and w_{ij} involve only later generators (asserted).
      Generator images satisfying these relations extend to a homomorphism
      whose value on a normal form is the corresponding image product.
    * The first r digits (p^r = [G:Φ(G)]) give a linear isomorphism
      G/Φ ≅ (Z_p)^r (asserted multiplicative with kernel Φ), so the induced
      map on G/Φ is the r×r digit matrix M of the first r images:
      surjectivity ⟺ det M ≠ 0 (Frattini argument), and the induced map
      fixes only the identity coset ⟺ det(M−I) ≠ 0.  The latter forces
      Fix(f) ⊆ Φ, so fixed points need only be counted inside Φ.
    * W = Z(G)∩γ₁(G) has order p (asserted), so |Fix(f)|=p ∧ Fix(f) ⊆ W
      reduces to: f fixes W's generator and has exactly p fixed points in Φ.
    """

    def __init__(self, cat):
        g = cat.group
        self.cat = cat
        n = self.n = g.n
        p = self.p = cat.p
        self.flat = g.mul.ravel()
        self.digits = _digits4(p)
        phi = gr.frattini(g)
        self.r = r = 4 - {p: 1, p * p: 2}[len(phi)]
        for t in range(r):
            dig = self.digits[t]
            assert (dig[g.mul] == (dig[:, None] + dig[None, :]) % p).all()
        assert set(phi) == set(np.nonzero((self.digits[:r] == 0).all(axis=0))[0])
        w_sub = sorted(set(gr.center(g)) & set(gr.derived_subgroup(g)))
        assert len(w_sub) == p
        self.w = w_sub[1]
        if r == 3:
            assert set(phi) == set(w_sub)
        self.pow_targets = []
        for k, a in enumerate(cat.gens):
            v = gr.power(g, a, p)
            assert (self.digits[: k + 1, v] == 0).all()
            self.pow_targets.append(self.digits[:, v])
        self.comm_targets = {}
        for i in range(4):
            for j in range(i + 1, 4):
                ai, aj = cat.gens[i], cat.gens[j]
                w = int(g.mul[g.inv[g.mul[ai, aj]], g.mul[aj, ai]])
                assert (self.digits[: j + 1, w] == 0).all()
                self.comm_targets[i, j] = self.digits[:, w]

    def _word(self, pws, dig, start=0, acc=None):
        for k in range(start, 4):
            e = int(dig[k])
            if e:
                col = pws[k][:, e]
                acc = col if acc is None else self.flat[acc * self.n + col]
        if acc is None:
            acc = np.zeros(len(pws[0]), dtype=np.int64)
        return acc

    def good(self, cols):
        n, p, flat = self.n, self.p, self.flat
        pws = []
        for col in cols:
            pw = np.zeros((len(col), p), dtype=np.int64)
            for j in range(1, p):
                pw[:, j] = flat[pw[:, j - 1] * n + col]
            pws.append(pw)
        for k in range(4):
            lhs = flat[pws[k][:, p - 1] * n + cols[k]]
            if (lhs != self._word(pws, self.pow_targets[k], k + 1)).any():
                raise NotAutomorphism(f"power relation of generator {k + 1}")
        for (i, j), dig in self.comm_targets.items():
            lhs = flat[cols[j] * n + cols[i]]
            rhs = self._word(pws, dig, j + 1, acc=flat[cols[i] * n + cols[j]])
            if (lhs != rhs).any():
                raise NotAutomorphism(f"commutation relation ({i + 1},{j + 1})")
        r = self.r
        m = [[self.digits[t][cols[k]] % p for k in range(r)] for t in range(r)]
        if r == 2:
            det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            det_shift = (m[0][0] - 1) * (m[1][1] - 1) - m[0][1] * m[1][0]
        else:
            def det3(a):
                return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
            det = det3(m)
            det_shift = det3([[m[t][k] - (t == k) for k in range(r)]
                              for t in range(r)])
        if (det % p == 0).any():
            raise NotAutomorphism("images do not generate")
        ok = det_shift % p != 0
        ok &= self._word(pws, self.digits[:, self.w]) == self.w
        if r == 2:
            vals = flat[pws[2][:, :, None] * n + pws[3][:, None, :]]
            targets = np.arange(p * p).reshape(p, p)
            ok &= (vals == targets[None, :, :]).sum(axis=(1, 2)) == p
        return ok


def _admissible_count(i, p):
    names, ranges, extra = _family_spec(i, p)
    total = 1
    for rng in ranges:
        total *= len(rng)
    if i == 12:
        total = (p * p - 1) * (p * p - p) * p**4 * (p - 1) * p
    if i == 14:
        total = (p * p - 1) * (p * p - p) * p**3
    return total


def _param_grid(i, p):
    names, ranges, extra = _family_spec(i, p)
    grids = np.meshgrid(*[np.array(r) for r in ranges], indexing="ij")
    cols = [g.ravel() for g in grids]
    if extra is not None:
        keep = np.fromiter(
            (extra(t) for t in zip(*cols)), count=len(cols[0]), dtype=bool
        )
        cols = [c[keep] for c in cols]
    return dict(zip(names, cols))


def _param_sample(i, p, count, seed):
    names, ranges, extra = _family_spec(i, p)
    rng = np.random.default_rng([seed, i, p])
    cols = {name: np.empty(0, dtype=np.int64) for name in names}
    have = 0
    while have < count:
        want = count - have
        draw = [np.array(r)[rng.integers(0, len(r), size=2 * want)] for r in ranges]
        if extra is not None:
            keep = np.fromiter(
                (extra(t) for t in zip(*draw)), count=len(draw[0]), dtype=bool
            )
            draw = [c[keep] for c in draw]
        take = min(len(draw[0]), want)
        for name, col in zip(names, draw):
            cols[name] = np.concatenate([cols[name], col[:take]])
        have += take
    return cols


def _gen_image_columns(i, p, cols, cat):
    """Vectorized generator-image indices for a whole parameter batch."""
    mul, inv = cat.group.mul, cat.group.inv
    flat, n = mul.ravel(), cat.group.n

    def idx(e1, e2, e3, e4):
        return ((e1 % p) * p + e2 % p) * p * p + (e3 % p) * p + e4 % p

    def power(x, k):
        acc = np.zeros_like(x)
        for _ in range(k):
            acc = flat[acc * n + x]
        return acc

    def comm(x, y):
        return flat[inv[x] * n + flat[inv[y] * n + flat[x * n + y]]]

    zero = np.zeros(len(next(iter(cols.values()))), dtype=np.int64)
    c = {k: np.asarray(v, dtype=np.int64) for k, v in cols.items()}
    if i == 3:
        fa1 = idx(c["u1"], c["u2"], c["u3"], c["u4"])
        fa2 = idx(zero, c["v2"], c["v3"], c["v4"])
        return fa1, fa2, comm(fa2, fa1), power(fa1, p)
    if i == 4:
        fa1 = idx(zero + 1, c["u2"], c["u3"], c["u4"])
        fa2 = idx(zero, c["v2"], c["v3"], c["v4"])
        return fa1, fa2, power(fa1, p), power(fa2, p)
    if i == 6:
        fa1 = idx(c["u1"], c["u2"], c["u3"], c["u4"])
        fa2 = idx(zero, zero + 1, zero, c["v4"])
        fa3 = power(fa1, p)
        return fa1, fa2, fa3, power(fa3, p)
    if i == 7:
        fa1 = idx(c["u1"], c["u2"], c["u3"], c["u4"])
        fa2 = idx(zero, c["v2"], c["v3"], c["v4"])
        fa3 = comm(fa2, fa1)
        return fa1, fa2, fa3, comm(fa3, fa1)
    if i == 8:
        u1inv = np.array([pow(int(v), -1, p) for v in c["u1"]], dtype=np.int64)
        fa1 = idx(c["u1"], c["u2"], c["u3"], c["u4"])
        fa2 = idx(zero, u1inv, c["v3"], c["v4"])
        return fa1, fa2, comm(fa2, fa1), power(fa1, p)
    if i in (9, 10):
        fa1 = idx(c["u1"], zero, c["u3"], c["u4"])
        fa2 = idx(zero, c["v2"], c["v3"], c["v4"])
        fa3 = comm(fa2, fa1)
        fa4 = power(fa2, p)
        if i == 10:
            fa4 = power(fa4, pow(cat.w, -1, p))
        return fa1, fa2, fa3, fa4
    if i == 12:
        fa1 = idx(c["u1"], c["u2"], c["u3"], c["u4"])
        fa2 = idx(c["v1"], c["v2"], c["v3"], c["v4"])
        return fa1, fa2, idx(zero, zero, c["w3"], c["w4"]), comm(fa2, fa1)
    if i == 13:
        fa1 = idx(c["u1"], c["u2"], c["u3"], c["u4"])
        fa2 = idx(zero, zero + 1, c["v3"], c["v4"])
        return fa1, fa2, idx(zero, zero, c["w3"], c["w4"]), power(fa1, p)
    if i == 14:
        fa1 = idx(c["u1"], c["u2"], zero, c["u4"])
        fa2 = idx(c["v1"], c["v2"], zero, c["v4"])
        det = c["u1"] * c["v2"] - c["v1"] * c["u2"]
        return fa1, fa2, idx(zero, zero, det, c["w4"]), comm(fa2, fa1)
    raise BadParams(f"unknown catalog id {i}")


def verify_catalog(p, sample_size=100_000, seed=0xC0C1,
                           exhaustive_limit=10**6, batch=8192, ids=CATALOG_IDS):
    """Compare the closed-form good conditions against direct computation.

    Exhausts a family when it has at most `exhaustive_limit` admissible
    tuples, otherwise checks `sample_size` seeded samples.  Returns one report
    row per catalog group.
    """
    _check_prime(p)
    if p == 3:
        raise BadPrime("automorphism families are stated for p > 3")
    report = []
    for i in ids:
        cat = catalog_group(i, p)
        total = _admissible_count(i, p)
        if total <= exhaustive_limit:
            cols, mode = _param_grid(i, p), "exhaustive"
        else:
            cols, mode = _param_sample(i, p, sample_size, seed), "sampled"
        names = list(cols)
        checker = _FamilyChecker(cat)
        count = len(cols[names[0]])
        closed = _closed_form(i, p, cols)
        direct = np.empty(count, dtype=bool)
        gen_cols = _gen_image_columns(i, p, cols, cat)
        for lo in range(0, count, batch):
            hi = min(lo + batch, count)
            direct[lo:hi] = checker.good([col[lo:hi] for col in gen_cols])
        bad = np.nonzero(closed != direct)[0]
        mismatches = [
            {
                "params": {k: int(cols[k][j]) for k in names},
                "closed_form": bool(closed[j]),
                "direct": bool(direct[j]),
            }
            for j in bad[:20]
        ]
        report.append(
            {
                "group_id": i,
                "prime": p,
                "mode": mode,
                "tuples_checked": int(count),
                "good_count": int(direct.sum()),
                "mismatches": mismatches,
            }
        )
    return report
