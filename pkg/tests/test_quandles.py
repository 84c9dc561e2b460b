import itertools
import json
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplyq import constructions as cn
from simplyq import groups as gr
from simplyq import pgroups as pg
from simplyq import quandles as qd

DATA = pathlib.Path(__file__).parent / "data"
ORACLE = json.loads((DATA / "quandles_oracle.json").read_text())


def aff_cyclic(n, u):
    return cn.affine(gr.cyclic_group(n), (u * np.arange(n)) % n)


def flags(q):
    return {
        "quandle": q.is_quandle,
        "latin": q.is_latin,
        "involutory": q.is_involutory,
        "connected": q.is_connected,
        "faithful": q.is_faithful,
    }


def check_flags(q, entry):
    for key, want in entry.items():
        if key in ("quandle", "latin", "involutory", "connected", "faithful"):
            assert flags(q)[key] == want, key


def blocks_of(part):
    out = [[] for _ in range(part.count)]
    for x, c in enumerate(part.ids):
        out[int(c)].append(x)
    return sorted(out)


def heis_diag(p, b, c):
    return pg.heisenberg_automorphism(p, [[b, 0], [0, c]])


def s4_transposition_quandle():
    transpositions = [t for t in itertools.permutations(range(4))
                      if sum(t[i] != i for i in range(4)) == 2]
    idx = {t: i for i, t in enumerate(transpositions)}

    def conj_perm(a, b):
        ainv = [0] * 4
        for i, v in enumerate(a):
            ainv[v] = i
        return tuple(a[b[ainv[i]]] for i in range(4))

    table = [[idx[conj_perm(a, b)] for b in transpositions]
             for a in transpositions]
    return qd.validate_left_quasigroup(np.array(table))


def test_core_z5():
    facts = ORACLE["core_z5"]
    q = cn.core(gr.cyclic_group(5))
    check_flags(q, facts)
    group, stab, conj, points = qd.coset_representation(q)
    assert group.n == facts["dis_order"]
    assert len(stab) == facts["dis_stab0_order"]
    # conjugation by L_0 inverts the (abelian) displacement group
    assert np.array_equal(conj, group.inv) == facts["conj_by_L0_is_inversion"]
    assert sorted(points.tolist()) == list(range(5))
    assert list(qd.subquandle_generated(q, [0, 1])) == facts["subquandle_01"]


def test_affine_flag_combinations():
    neg = cn.affine(gr.abelian_group([3, 3]),
                    (2 * np.arange(9)) % 3 + 3 * ((2 * (np.arange(9) // 3)) % 3))
    check_flags(neg, ORACLE["aff_z3sq_negI"])
    assert qd.enumerate_group(qd.dis(neg)).order == ORACLE["aff_z3sq_negI"]["dis_order"]
    check_flags(aff_cyclic(9, 4), ORACLE["aff_z9_4"])
    check_flags(aff_cyclic(9, 2), ORACLE["aff_z9_2"])


def test_aff_z9_2_displacement_structure():
    facts = ORACLE["aff_z9_2"]
    q = aff_cyclic(9, 2)
    d = qd.enumerate_group(qd.dis(q))
    assert d.order == facts["dis_order"]
    derived = qd.derived_perm_group(d)
    assert derived.order == facts["gamma1_dis_order"]
    gamma = qd.gamma_partition(q)
    assert (gamma.count == q.n) == facts["gammaQ_discrete"]
    assert blocks_of(qd.hn_congruence(q, 2)) == facts["hn2_blocks"]
    assert blocks_of(qd.hn_congruence(q, 3)) == facts["hn3_blocks"]
    part = qd.normalize_partition([x % 3 for x in range(9)])
    quot, _ = qd.quotient_quandle(q, part)
    same = np.array_equal(quot.star, aff_cyclic(3, 2).star)
    assert same == facts["phi_quotient_equals_aff32"]


def test_core_z9_congruences():
    facts = ORACLE["core_z9"]
    q = cn.core(gr.cyclic_group(9))
    check_flags(q, facts)
    cong = qd.congruence_generated(q, [(0, 3)])
    assert blocks_of(cong) == facts["cong_03_blocks"]
    assert list(qd.subquandle_generated(q, [0, 3])) == facts["subquandle_03"]
    rel = qd.enumerate_group(qd.dis_rel(q, cong))
    ker = qd.dis_ker(q, cong)
    kset = {e.tobytes() for e in ker.elements}
    assert all(e.tobytes() in kset for e in rel.elements)
    quot, _ = qd.quotient_quandle(q, cong)
    assert qd.enumerate_group(qd.dis(q)).order == \
        len(ker.elements) * qd.enumerate_group(qd.dis(quot)).order


def test_latin_congruence_collapse():
    q = aff_cyclic(5, 3)
    assert qd.congruence_generated(q, [(0, 1)]).count == \
        ORACLE["aff_z5_3_cong_01_nblocks"]


def test_projection_quandle():
    facts = ORACLE["proj4"]
    q = cn.projection(4)
    assert q.is_quandle == facts["quandle"]
    assert q.is_connected == facts["connected"]
    assert qd.enumerate_group(qd.lmlt(q)).order == facts["lmlt_order"]


def test_conj_heisenberg():
    facts = ORACLE["conj_heis3"]
    q = cn.conj(pg.heisenberg(3))
    assert q.is_quandle == facts["quandle"]
    assert q.is_connected == facts["connected"]
    assert q.is_faithful == facts["faithful"]
    assert qd.cayley_kernel(q).count == facts["cayley_class_count"]


def test_conj_s4_transpositions():
    facts = ORACLE["conj_s4_transpositions"]
    q = s4_transposition_quandle()
    assert q.is_quandle and q.is_connected == facts["connected"]
    group, stab, conj, points = qd.coset_representation(q)
    assert group.n == facts["dis_order"]
    assert len(stab) == facts["dis_stab0_order"]
    assert qd.is_principal(q) == facts["principal"]


def test_coset_reconstruction():
    """Connected Q is the coset quandle of Dis/stab with conjugation by L_x."""
    for q in (s4_transposition_quandle(),
              cn.core(gr.semidirect_cyclic(7, 3, 2)),
              cn.core(gr.cyclic_group(9))):
        group, stab, conj, points = qd.coset_representation(q)
        rebuilt = cn.coset_quandle(group, stab, conj)
        assert rebuilt.n == q.n
        assert qd.quandle_isomorphic(rebuilt, q) is not None


def test_heis5_principal_d23():
    facts = ORACLE["heis5_d23"]
    q = cn.principal(pg.heisenberg(5), heis_diag(5, 2, 3))
    check_flags(q, facts)
    alpha = qd.cayley_kernel(q)
    assert alpha.count == facts["cayley_class_count"]
    assert sorted({len(b) for b in blocks_of(alpha)}) == facts["cayley_class_sizes"]
    group, stab, _, _ = qd.coset_representation(q)
    assert group.n == facts["dis_order"]
    assert len(stab) == facts["dis_stab0_order"]
    assert qd.is_principal(q)
    # the Cayley kernel's relative displacement group is trivial (equal rows),
    # the kernel to the quotient is not: index identity |Dis| = |ker|·|Dis(Q/α)|
    assert qd.enumerate_group(qd.dis_rel(q, alpha)).order == 1
    ker = qd.dis_ker(q, alpha)
    quot, _ = qd.quotient_quandle(q, alpha)
    assert len(ker.elements) == 5
    assert len(ker.elements) * qd.enumerate_group(qd.dis(quot)).order == group.n


def test_heis5_principal_d22():
    facts = ORACLE["heis5_d22"]
    q = cn.principal(pg.heisenberg(5), heis_diag(5, 2, 2))
    check_flags(q, facts)
    d = qd.enumerate_group(qd.dis(q))
    assert d.order == facts["dis_order"]
    assert qd.derived_perm_group(d).order == facts["gamma1_dis_order"]
    gamma = qd.gamma_partition(q)
    assert gamma.count == facts["gammaQ_class_count"]
    assert sorted({len(b) for b in blocks_of(gamma)}) == facts["gammaQ_class_sizes"]


def test_heis5_coset_quandle():
    facts = ORACLE["heis5_coset_z_d23"]
    h5 = pg.heisenberg(5)
    q = cn.coset_quandle(h5, range(5), heis_diag(5, 2, 3))
    assert q.n == facts["order"]
    check_flags(q, facts)
    assert qd.enumerate_group(qd.dis(q)).order == facts["dis_order"]
    f = np.zeros(25, dtype=np.int64)
    for i in range(25):
        f[i] = ((2 * (i // 5)) % 5) * 5 + (3 * (i % 5)) % 5
    aff = cn.affine(gr.abelian_group([5, 5]), f)
    iso = qd.quandle_isomorphic(q, aff)
    assert (iso is not None) == facts["iso_to_aff_d23"]
    assert np.array_equal(iso[q.star], aff.star[iso[:, None], iso[None, :]])


def test_core_of_nonabelian_groups():
    q21 = cn.core(gr.semidirect_cyclic(7, 3, 2))
    facts = ORACLE["core_z7_semi_z3"]
    assert q21.n == facts["order"]
    check_flags(q21, facts)
    assert qd.enumerate_group(qd.dis(q21)).order == facts["dis_order"]
    qh = cn.core(pg.heisenberg(3))
    check_flags(qh, ORACLE["core_heis3"])
    assert qd.enumerate_group(qd.dis(qh)).order == ORACLE["core_heis3"]["dis_order"]


def test_aff_z15_is_product():
    q15 = aff_cyclic(15, 2)
    prod = cn.direct_product(aff_cyclic(3, 2), aff_cyclic(5, 2))
    crt = np.array([(x % 3) * 5 + x % 5 for x in range(15)])
    same = np.array_equal(crt[q15.star], prod.star[crt[:, None], crt[None, :]])
    assert same == ORACLE["aff_z15_2_iso_product"]
    assert qd.quandle_isomorphic(q15, prod) is not None


def test_nine_point_quandles_not_isomorphic():
    a = cn.affine(gr.abelian_group([3, 3]),
                  (2 * np.arange(9)) % 3 + 3 * ((2 * (np.arange(9) // 3)) % 3))
    b = aff_cyclic(9, 2)
    assert (qd.quandle_isomorphic(a, b) is not None) == \
        ORACLE["aff_z3sq_d22_vs_aff_z9_2_iso"]


def test_validate_classifies_and_rejects():
    with pytest.raises(qd.RowNotBijective):
        qd.validate_left_quasigroup([[0, 0], [1, 1]])
    swap = qd.validate_left_quasigroup([[1, 0], [1, 0]])
    assert swap.is_rack and not swap.is_quandle
    q = qd.validate_left_quasigroup([[0, 1], [0, 1]])
    assert q.is_quandle and not q.is_connected
    with pytest.raises(qd.QuandleError):
        qd.validate_left_quasigroup([[0, 1, 2], [1, 2, 0]])


def test_quotient_rejects_non_congruence():
    q = cn.core(gr.cyclic_group(9))
    bad = qd.normalize_partition([0, 0] + list(range(1, 8)))
    with pytest.raises(qd.NotCongruence) as err:
        qd.quotient_quandle(q, bad)
    rx, ry, x, y = err.value.args[0]
    ids = bad.ids
    assert int(ids[rx]) == int(ids[x]) and int(ids[ry]) == int(ids[y])
    assert int(ids[q.star[rx, ry]]) != int(ids[q.star[x, y]])


def test_orbit_congruence_checks_normality():
    q = aff_cyclic(9, 2)
    part = qd.orbit_congruence(q, qd.dis(q), check_normal=True)
    assert part.count == 1
    qs4 = s4_transposition_quandle()
    d = qd.enumerate_group(qd.dis(qs4))
    flip = next(e for e in d.elements
                if not np.array_equal(e, np.arange(6))
                and np.array_equal(e[e], np.arange(6)))
    with pytest.raises(gr.NotNormal):
        qd.orbit_congruence(qs4, qd.PermGroup(6, [flip]), check_normal=True)


def test_partition_helpers():
    part = qd.normalize_partition([5, 5, 2, 2, 5])
    assert part.count == 2
    assert part.ids.tolist() == [1, 1, 0, 0, 1]
    disc = qd.discrete_partition(4)
    assert disc.count == 4
    coarse = qd.normalize_partition([0, 0, 1, 1])
    assert qd.refines(disc, coarse)
    assert not qd.refines(coarse, disc)


def test_enumerate_group_cap():
    q = cn.principal(pg.heisenberg(5), heis_diag(5, 2, 3))
    with pytest.raises(gr.CapExceeded):
        qd.enumerate_group(qd.dis(q), cap=10)


def test_file_roundtrip(tmp_path):
    q = cn.core(gr.cyclic_group(5))
    path = tmp_path / "q.txt"
    qd.write_quandle(path, q)
    back = qd.read_quandle(path)
    assert np.array_equal(back.star, q.star)
    (tmp_path / "bad1.txt").write_text("rack 2\n0 1\n1 0\n")
    with pytest.raises(qd.QuandleError):
        qd.read_quandle(tmp_path / "bad1.txt")
    (tmp_path / "bad2.txt").write_text("quandle 2\n0 1 1\n")
    with pytest.raises(qd.QuandleError):
        qd.read_quandle(tmp_path / "bad2.txt")


def test_gamma_requires_connected():
    with pytest.raises(qd.NotConnected):
        qd.gamma_partition(cn.projection(3))
    with pytest.raises(qd.NotConnected):
        qd.coset_representation(aff_cyclic(9, 4))
    with pytest.raises(qd.NotConnected):
        qd.is_principal(cn.projection(3))


def test_hn_congruence_of_dis_matches_orbits():
    q = aff_cyclic(9, 2)
    h1 = qd.hn_congruence(q, 1)
    assert h1.count == 1  # connected: H_1 orbits = Dis orbits = everything
    # every translation here has order 6, so the exponent wraps to identity
    assert qd.hn_congruence(q, 6).count == 9


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 12), st.data())
def test_affine_cyclic_properties(n, data):
    units = [u for u in range(1, n) if np.gcd(u, n) == 1]
    u = data.draw(st.sampled_from(units))
    q = aff_cyclic(n, u)
    assert q.is_quandle
    unit_delta = int(np.gcd(u - 1, n)) == 1
    assert q.is_latin == unit_delta
    assert q.is_connected == unit_delta
    assert q.is_faithful == unit_delta
    assert q.is_involutory == (u * u % n == 1)
    d = qd.enumerate_group(qd.dis(q))
    assert d.order == n // int(np.gcd(u - 1, n))
    if q.is_connected:
        assert qd.is_principal(q)


@settings(max_examples=25, deadline=None)
@given(st.permutations(list(range(5))))
def test_isomorphism_found_under_relabeling(perm):
    q = cn.core(gr.cyclic_group(5))
    sigma = np.array(perm)
    inv = np.empty(5, dtype=np.int64)
    inv[sigma] = np.arange(5)
    table = sigma[q.star[inv[:, None], inv[None, :]]]
    q2 = qd.validate_left_quasigroup(table)
    image = qd.quandle_isomorphic(q, q2)
    assert image is not None
    assert np.array_equal(image[q.star], q2.star[image[:, None], image[None, :]])


def test_cayley_kernel_is_congruence():
    for q in (cn.conj(pg.heisenberg(3)),
              cn.principal(pg.heisenberg(5), heis_diag(5, 2, 3)),
              cn.core(gr.cyclic_group(9))):
        quot, _ = qd.quotient_quandle(q, qd.cayley_kernel(q))
        assert quot.is_quandle
