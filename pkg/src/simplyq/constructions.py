"""Quandle constructors: affine, coset/principal, conjugation, core,
products, Sylow components, and the Q_N cover construction."""

from dataclasses import dataclass

import numpy as np

from . import groups as gr
from . import quandles as qd


class HNotFixed(qd.QuandleError):
    pass


class NotInDis(qd.QuandleError):
    pass


def _as_auto(g, f):
    f = np.asarray(f, dtype=np.int64)
    assert gr.is_automorphism(g, f), "map is not an automorphism"
    return f


def affine(g, f):
    """Aff(A, f): x*y = x + f(y - x) over an abelian group."""
    if not gr.is_abelian(g):
        raise gr.NotAbelian("affine quandles need an abelian group")
    f = _as_auto(g, f)
    diff = g.mul[g.inv[:, None], np.arange(g.n)[None, :]]
    return qd.validate_left_quasigroup(g.mul[np.arange(g.n)[:, None], f[diff]])


def principal(g, f):
    """Q(G, f): x*y = x·f(x⁻¹y) on all of G."""
    f = _as_auto(g, f)
    diff = g.mul[g.inv[:, None], np.arange(g.n)[None, :]]
    return qd.validate_left_quasigroup(g.mul[np.arange(g.n)[:, None], f[diff]])


def coset_quandle(g, subgroup, f):
    """Q(G, H, f) on left cosets xH, for H inside Fix(f)."""
    f = _as_auto(g, f)
    sub = tuple(int(s) for s in subgroup)
    for s in sub:
        if int(f[s]) != s:
            raise HNotFixed(f"subgroup element {s} moved by the automorphism")
    coset_id = np.full(g.n, -1, dtype=np.int64)
    reps = []
    for x in range(g.n):
        if coset_id[x] >= 0:
            continue
        coset_id[g.mul[x, list(sub)]] = len(reps)
        reps.append(x)
    reps = np.array(reps, dtype=np.int64)
    inner = g.mul[g.inv[reps][:, None], reps[None, :]]
    table = coset_id[g.mul[reps[:, None], f[inner]]]
    return qd.validate_left_quasigroup(table)


def conj_f(g, f):
    """Conj_f(G): x*y = x·f(y·x⁻¹)."""
    f = _as_auto(g, f)
    table = np.array(
        [[g.mul[x, f[g.mul[y, g.inv[x]]]] for y in range(g.n)] for x in range(g.n)]
    )
    return qd.validate_left_quasigroup(table)


def conj(g):
    """Conjugation quandle on all of G."""
    return conj_f(g, np.arange(g.n))


def core(g):
    """Core(G): x*y = x·y⁻¹·x, an involutory quandle."""
    table = np.array(
        [[g.mul[g.mul[x, g.inv[y]], x] for y in range(g.n)] for x in range(g.n)]
    )
    return qd.validate_left_quasigroup(table)


def projection(n):
    """x*y = y."""
    return qd.validate_left_quasigroup(np.tile(np.arange(n), (n, 1)))


def direct_product(q1, q2):
    """Componentwise product, points encoded row-major as x1·n2 + x2."""
    n1, n2 = q1.n, q2.n
    s1 = q1.star[:, None, :, None]
    s2 = q2.star[None, :, None, :]
    table = (s1 * n2 + s2).reshape(n1 * n2, n1 * n2)
    return qd.validate_left_quasigroup(table)


def _subgroup_group(g, elements):
    """Abstract group on a subgroup's elements plus the index embedding."""
    elements = list(map(int, elements))
    pos = {e: i for i, e in enumerate(elements)}
    mul = [[pos[int(g.mul[a, b])] for b in elements] for a in elements]
    return gr.validate_group(mul), elements, pos


def p_components(g, f):
    """Sylow components of a principal quandle over a nilpotent group.

    Returns (list of (prime, QuandleTable)), and the point map sending each
    row-major product point to the matching point of principal(g, f).
    """
    f = _as_auto(g, f)
    sylows = gr.sylow_decomposition(g)
    comps = []
    factors = []
    for p, elements in sylows:
        for e in elements:
            if int(f[e]) not in set(map(int, elements)):
                raise gr.NotInvariant(f"automorphism does not preserve {p}-Sylow")
        sub, elems, pos = _subgroup_group(g, elements)
        f_sub = np.array([pos[int(f[e])] for e in elems], dtype=np.int64)
        comps.append((p, principal(sub, f_sub)))
        factors.append(elems)
    sizes = [len(e) for e in factors]
    total = int(np.prod(sizes)) if sizes else 1
    assert total == g.n
    point_map = np.empty(total, dtype=np.int64)
    for idx in range(total):
        rem, parts = idx, []
        for size in reversed(sizes):
            parts.append(rem % size)
            rem //= size
        parts.reverse()
        acc = 0
        for elems, part in zip(factors, parts):
            acc = int(g.mul[acc, elems[part]])
        point_map[idx] = acc
    return comps, point_map


@dataclass(frozen=True)
class QNDiagram:
    """The cover Q_N with the maps of its commuting square.

    dis_to_q:   Q₁ = Q(Dis, conj L_x) → Q,        g ↦ g(x)
    dis_to_qn:  Q₁ → Q_N,                          g ↦ gN
    to_quotient: Q_N → Q/O_N,                      gN ↦ [g(x)]
    q_to_quotient: Q → Q/O_N class ids.
    """

    q1: object
    qn: object
    quotient: object
    dis_to_q: np.ndarray
    dis_to_qn: np.ndarray
    to_quotient: np.ndarray
    q_to_quotient: np.ndarray


def build_QN(q, n_gens, x=0):
    """Q_N = Q(Dis/N, induced conj by L_x) for N = ⟨n_gens⟩ ⊴ LMlt, N ≤ Dis."""
    if not q.is_connected:
        raise qd.NotConnected("Q_N needs a connected base")
    d = qd.enumerate_group(qd.dis(q))
    index = {e.tobytes(): i for i, e in enumerate(d.elements)}
    closure = qd.enumerate_group(qd.PermGroup(q.n, [np.asarray(h) for h in n_gens]))
    for e in closure.elements:
        if e.tobytes() not in index:
            raise NotInDis("N is not inside the displacement group")
    for lx in q.star:
        lx_inv = qd._invert(lx)
        for s in closure.elements:
            if qd._compose(lx, qd._compose(s, lx_inv)).tobytes() not in index:
                raise gr.NotNormal("N is not normal in LMlt")
    size = len(d.elements)
    mul = np.empty((size, size), dtype=np.int64)
    for i, a in enumerate(d.elements):
        for j, b in enumerate(d.elements):
            mul[i, j] = index[qd._compose(a, b).tobytes()]
    d_abstract = gr.validate_group(mul.tolist())
    n_indices = tuple(sorted(index[e.tobytes()] for e in closure.elements))
    dbar, proj = gr.quotient(d_abstract, n_indices)
    lx = q.star[x]
    lx_inv = qd._invert(lx)
    conj_map = np.array(
        [index[qd._compose(lx, qd._compose(e, lx_inv)).tobytes()] for e in d.elements],
        dtype=np.int64,
    )
    f_bar = gr.induced_automorphism(conj_map, proj)
    qn = principal(dbar, f_bar)
    q1 = principal(d_abstract, conj_map)
    o_n = qd.orbit_partition(q.n, [np.asarray(h) for h in n_gens])
    quotient, _ = qd.quotient_quandle(q, o_n)
    dis_to_q = np.array([int(e[x]) for e in d.elements], dtype=np.int64)
    to_quotient = np.empty(dbar.n, dtype=np.int64)
    for i in range(size):
        to_quotient[proj.image[i]] = o_n.ids[dis_to_q[i]]
    return QNDiagram(
        q1=q1,
        qn=qn,
        quotient=quotient,
        dis_to_q=dis_to_q,
        dis_to_qn=proj.image.copy(),
        to_quotient=to_quotient,
        q_to_quotient=o_n.ids.copy(),
    )
