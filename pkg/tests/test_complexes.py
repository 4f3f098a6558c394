from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import n_components
from wagoner.complexes import (SimplicialComplex, build_building_flag, build_parabolic_complex,
                               build_wagoner, building_complex, diagram_check, left_action,
                               n_action_quotient, projection, quotient_complex, right_n_action,
                               standard_apartment, strict_fundamental_domain_check,
                               translate_apartment)
from wagoner.rootdata import instantiate


def test_wagoner_sl32_shape(w_sl32):
    assert w_sl32.n_vertices == 378 == 6 * 21 + 6 * 42
    assert w_sl32.dimension == 1
    assert w_sl32.poset_height == 1


def test_wagoner_sl33_vertex_count(sl33):
    assert build_wagoner(sl33, skeleton_dim=1).n_vertices == 4992 == 6 * 5616 // 27 + 6 * 5616 // 9


def test_vertices_contain_their_reps(sl33):
    cx = build_wagoner(sl33, skeleton_dim=1)
    for fi, f in enumerate(cx.families):
        assert np.array_equal(f.labels[f.reps], np.arange(f.count))
        # the coset is keyed by its smallest element
        for c in range(0, f.count, max(1, f.count // 20)):
            members = np.flatnonzero(f.labels == c)
            assert f.reps[c] == members.min()


def test_apartment_is_12_cycle(sl32, w_sl32):
    apt = standard_apartment(sl32, w_sl32)
    cx = apt.complex
    assert cx.f_vector == [12, 12]
    assert sorted(Counter(np.bincount(cx.edges.ravel(), minlength=12)).items()) == [(2, 12)]
    assert n_components(cx) == 1


def test_apartment_projects_bijectively(sl32, w_sl32):
    apt = standard_apartment(sl32, w_sl32)
    f = projection(sl32, w_sl32, "building")
    assert len(set(f.vertex_map[apt.vertices].tolist())) == 12


def test_translated_apartment_passes_through_g_chamber(sl32, w_sl32):
    apt = standard_apartment(sl32, w_sl32)
    fc = w_sl32.family_by_simplex[sl32.c0]
    for g in (5, 17, 100):
        moved = translate_apartment(sl32, w_sl32, apt, g)
        assert w_sl32.vertex_of(fc, g) in set(moved.tolist())
        assert w_sl32.induced(moved.tolist())[0].f_vector == [12, 12]


def test_building_fano_plane(sl32):
    d = building_complex(sl32)
    assert d.f_vector == [14, 21]
    flag = build_building_flag(sl32)
    # barycentric subdivision: 7 points, 7 lines, 21 flags
    assert flag.f_vector == [35, 42]
    assert flag.euler_characteristic == d.euler_characteristic == -7


def test_building_sl33(sl33):
    assert building_complex(sl33).f_vector == [26, 52]


def test_projection_examples(sl32, w_sl32):
    f = projection(sl32, w_sl32, "parabolic")
    assert f.is_simplicial() and f.is_surjective()
    ident = int(sl32.G.index_of(sl32.engine.identity()[None])[0])
    fc = w_sl32.family_by_simplex[sl32.c0]
    tc = f.target.family_by_simplex[sl32.c0]
    assert f.vertex_map[w_sl32.vertex_of(fc, ident)] == f.target.vertex_of(tc, ident)
    sizes = {}
    for fi, fam in enumerate(f.target.families):
        verts = f.target.vertex_of(fi, fam.reps)
        sizes.setdefault(len(fam.simplex.J), set()).update(f.fiber_sizes()[verts].tolist())
    assert sizes == {0: {1}, 1: {6}}


def test_projection_onto_building_flag(sl32, w_sl32):
    f = projection(sl32, w_sl32, "building")
    assert f.is_simplicial() and f.is_surjective()
    assert set(f.fiber_sizes().tolist()) == {6, 18}


def test_n_action_sl32(sl32, w_sl32):
    rep = n_action_quotient(sl32, w_sl32)
    assert len(rep.action.elements) == 6
    assert rep.free and rep.orbit_sizes == Counter({6: 378})
    assert rep.quotient.n_vertices == 63
    assert rep.apartment_invariant


def test_diagram_sl32(sl32, w_sl32):
    rep = diagram_check(sl32, w_sl32)
    assert rep.vertices_checked == 378
    assert rep.square_commutes and rep.factors_through_quotient
    assert rep.parabolic_quotient_isomorphic


def test_strict_fundamental_domain(sl32, w_sl32, sp42):
    assert strict_fundamental_domain_check(sl32, w_sl32)
    assert strict_fundamental_domain_check(sp42)


def test_from_maximal_closes_faces():
    cx = SimplicialComplex.from_maximal(list("abcd"), [(0, 1, 2), (2, 3)])
    assert cx.f_vector == [4, 4, 1]
    assert cx.has_simplex((0, 2)) and not cx.has_simplex((0, 3))


def test_digest_stable_under_rebuild(sl32, w_sl32):
    assert build_wagoner(sl32).digest() == w_sl32.digest()


# ----------------------------------------------------------------------
# invariants


def _complex_rows(cx):
    return {k: {tuple(r) for r in rows.tolist()} for k, rows in cx.simplices.items()}


@given(st.integers(0, 167))
def test_left_action_is_simplicial(g):
    inst, cx = _sl32_complex()
    act = left_action(inst, cx, inst.G.mats[g])
    img = act.table[0]
    rows = _complex_rows(cx)
    for k in (1,):
        for r in rows[k]:
            assert tuple(sorted(img[list(r)].tolist())) in rows[k]
    for f in cx.families:
        block = img[f.offset:f.offset + f.count]
        assert sorted(block.tolist()) == list(range(f.offset, f.offset + f.count))


def test_left_action_transitive_on_families(sl32, w_sl32):
    act = left_action(sl32, w_sl32, sl32.G.mats)
    for f in w_sl32.families:
        orbit = set(act.table[:, f.offset].tolist())
        assert orbit == set(range(f.offset, f.offset + f.count))


def test_edge_stabiliser_is_smaller_group(sl32, w_sl32):
    act = left_action(sl32, w_sl32, sl32.G.mats)
    for a, b in w_sl32.edges[::37].tolist():
        fix = np.flatnonzero((act.table[:, a] == a) & (act.table[:, b] == b))
        small = min(w_sl32.families[w_sl32.family_of(a)].group.order,
                    w_sl32.families[w_sl32.family_of(b)].group.order)
        assert len(fix) == small


@given(st.integers(0, 167))
def test_projection_is_equivariant(g):
    inst, cx = _sl32_complex()
    f = projection(inst, cx, "building", _memo.get("flag"))
    _memo["flag"] = f.target
    src = left_action(inst, cx, inst.G.mats[g]).table[0]
    tgt = left_action(inst, f.target, inst.G.mats[g]).table[0]
    assert np.array_equal(f.vertex_map[src], tgt[f.vertex_map])


def test_quotient_commutes_with_projection(sl32, w_sl32):
    f = projection(sl32, w_sl32, "building")
    act = right_n_action(sl32, w_sl32)
    q, orbit_of, _ = quotient_complex(w_sl32, act)
    image = {}
    for v in range(w_sl32.n_vertices):
        image.setdefault(int(orbit_of[v]), set()).add(int(f.vertex_map[v]))
    assert all(len(s) == 1 for s in image.values())
    for a, b in w_sl32.edges.tolist():
        pa, pb = f.vertex_map[a], f.vertex_map[b]
        qa, qb = next(iter(image[int(orbit_of[a])])), next(iter(image[int(orbit_of[b])]))
        assert (pa, pb) == (qa, qb)


def test_parabolic_complex_of_sl32(sl32):
    P = build_parabolic_complex(sl32)
    # cosets of B (21), of the two maximal parabolics (7 + 7) and their conjugates
    assert P.n_vertices == sum(f.count for f in P.families)
    assert P.dimension == 1


def test_sp4_wagoner_counts(sp42):
    cx = build_wagoner(sp42, skeleton_dim=1)
    expected = sum(720 // sp42.U(s).order for s in sp42.simplices)
    assert cx.n_vertices == expected == 8 * 45 + 8 * 90
    assert n_components(cx) == 1


_memo = {}


def _sl32_complex():
    if "cx" not in _memo:
        inst = instantiate("SL", 3, 2)
        _memo["inst"], _memo["cx"] = inst, build_wagoner(inst)
    return _memo["inst"], _memo["cx"]


@pytest.mark.parametrize("q", [2, 3])
def test_gl_components_match_index(q):
    inst = instantiate("GL", 3, q)
    cx = build_wagoner(inst, skeleton_dim=1)
    assert n_components(cx) == q - 1


def test_n_quotient_versus_fundamental_cosets(sl32, w_sl32):
    # regression record: the orbit complex and the complex on cosets of the
    # groups U_s (s a face of c_0) have different sizes, so no isomorphism
    rep = n_action_quotient(sl32, w_sl32)
    assert rep.quotient.f_vector == [63, 84]
    assert rep.target.f_vector == [105, 84]
    assert not rep.isomorphic
