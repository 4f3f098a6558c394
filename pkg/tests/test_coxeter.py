import pytest
from hypothesis import given, strategies as st

from oracles import interval_by_definition, interval_size_histogram, polygon_roots, symmetric_roots
from wagoner.coxeter import (INF, CoxeterError, CoxeterSystem, complex_simplices, enumerate_ball,
                             interval_peel, link_bijection, polygon_labelling, prenilpotent_classify,
                             reconstruct_interval, root_interval)

A3 = [[1, 3, 2], [3, 1, 3], [2, 3, 1]]
B3 = [[1, 4, 2], [4, 1, 3], [2, 3, 1]]
A2_AFFINE = [[1, 3, 3], [3, 1, 3], [3, 3, 1]]


def dihedral(m):
    return CoxeterSystem([[1, m], [m, 1]], validate=m != 2)


def test_dihedral_orders():
    assert CoxeterSystem([[1, 3], [3, 1]]).order == 6
    assert CoxeterSystem([[1, 4], [4, 1]]).order == 8


def test_isolated_nodes_rejected():
    with pytest.raises(CoxeterError):
        CoxeterSystem([[1, 2], [2, 1]])
    with pytest.raises(CoxeterError):
        CoxeterSystem([[1]])
    with pytest.raises(CoxeterError):
        CoxeterSystem([[1, 5], [5, 1]])


def test_balls():
    assert len(enumerate_ball(CoxeterSystem([[1, 3], [3, 1]]), 10)) == 6
    ball = enumerate_ball(CoxeterSystem([[1, INF], [INF, 1]]), 3)
    assert sorted(w.word for w in ball) == sorted([(), (0,), (1,), (0, 1), (1, 0), (0, 1, 0), (1, 0, 1)])
    assert len(enumerate_ball(CoxeterSystem(A3), 10)) == 24


def test_ball_is_shortlex_sorted():
    ball = enumerate_ball(CoxeterSystem([[1, INF], [INF, 1]]), 4)
    keys = [w.shortlex_key() for w in ball]
    assert keys == sorted(keys)


def test_simplex_counts(a2, a3):
    by = lambda W: [sum(1 for s in complex_simplices(W) if len(s.J) == k) for k in range(W.rank)]
    assert by(a2) == [6, 6]
    # A3: chambers, panels, vertices = 24, 36, 14 (cosets of S_4 by its parabolics)
    assert by(a3) == [24, 36, 14]


def test_affine_a2_proper_simplices_cospherical():
    W = CoxeterSystem(A2_AFFINE)
    assert not W.spherical
    assert all(s.cospherical for s in complex_simplices(W, radius=3))


def test_root_counts_and_membership(a2):
    assert len(a2.roots()) == 6
    for s, a in enumerate(a2.simple_roots()):
        assert a.contains(a2.identity)
        assert not a.contains(a2.generator(s))


def test_hexagon_root_vertices(a2):
    order, roots = polygon_labelling(a2)
    for i, r in enumerate(roots):
        verts = set()
        for c in a2.unmask(r.chambers):
            verts.update({a2.simplex(c, (0,)), a2.simplex(c, (1,))})
        assert verts == {order[(i + k) % 6] for k in range(4)}


def test_classification(a2):
    a = a2.simple_roots()[0]
    assert prenilpotent_classify(a, -a).kind == "not-prenilpotent"
    assert prenilpotent_classify(a, a).kind != "not-prenilpotent"


def test_affine_nested_pair():
    W = CoxeterSystem([[1, INF], [INF, 1]])
    roots = W.roots(4)
    nested = [(a, b) for a in roots for b in roots
              if a != b and a.reflection != b.reflection
              and prenilpotent_classify(a, b).kind == "prenilpotent-nested"]
    assert nested
    a, b = nested[0]
    cls = prenilpotent_classify(a, b)
    assert cls.order is None and cls.nested


def test_hexagon_intervals(a2):
    _, al = polygon_labelling(a2)
    assert root_interval(al[0], al[2]).as_set() == {al[0], al[1], al[2]}
    assert root_interval(al[3], al[3]).as_set() == {al[3]}


def test_orthogonal_pair_in_a3(a3):
    ortho = [(a, b) for a in a3.roots() for b in a3.roots()
             if a != b and prenilpotent_classify(a, b).order == 2]
    assert ortho
    for a, b in ortho:
        assert root_interval(a, b).as_set() == {a, b}
        assert interval_peel(a, b).singleton


def test_interval_variants(a2):
    _, al = polygon_labelling(a2)
    assert root_interval(al[0], al[2], "left-open").as_set() == {al[1], al[2]}
    assert root_interval(al[0], al[2], "right-open").as_set() == {al[0], al[1]}
    assert root_interval(al[0], al[2], "open").as_set() == {al[1]}


def test_hexagon_peeling(a2):
    _, al = polygon_labelling(a2)
    res = interval_peel(al[0], al[2])
    assert not res.singleton and res.alpha_prime == al[1] and res.beta_prime == al[1]
    assert interval_peel(al[0], al[1]).singleton


def test_peel_rejects_nested(a2):
    a = a2.simple_roots()[0]
    with pytest.raises(CoxeterError):
        interval_peel(a, -a)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_polygon_law_against_arc_model(m):
    W = dihedral(m)
    _, roots = polygon_labelling(W)
    k = 2 * m
    model = polygon_roots(m)
    chambers = frozenset(range(k))
    for j in range(k):
        for i in range(1, m):
            got = root_interval(roots[j], roots[(j + i) % k], method="definition").as_set()
            assert got == {roots[(j + t) % k] for t in range(i + 1)}
            arc = interval_by_definition(model, model[j], model[(j + i) % k], chambers)
            assert len(arc) == len(got) == i + 1


def test_a3_interval_histogram_matches_permutation_model(a3):
    roots, chambers = symmetric_roots(4)
    expected = interval_size_histogram(roots, chambers)
    got = {}
    for a in a3.roots():
        for b in a3.roots():
            cls = prenilpotent_classify(a, b)
            if cls.kind == "not-prenilpotent" or cls.nested:
                continue
            size = len(root_interval(a, b, method="definition"))
            got[size] = got.get(size, 0) + 1
    assert got == expected == {2: 72, 3: 48}


@pytest.mark.parametrize("matrix", [[[1, 3], [3, 1]], [[1, 4], [4, 1]], [[1, 6], [6, 1]], A3, B3])
def test_peeling_reconstructs_intervals(matrix):
    W = CoxeterSystem(matrix)
    for a in W.roots():
        for b in W.roots():
            cls = prenilpotent_classify(a, b)
            if a == b or cls.kind == "not-prenilpotent" or cls.nested:
                continue
            full = root_interval(a, b, method="definition").as_set()
            members, steps = reconstruct_interval(a, b)
            assert set(members) == full and steps <= len(full)


def test_simplified_interval_agrees_with_definition():
    W = CoxeterSystem(B3)
    for a in W.roots():
        for b in W.roots():
            if prenilpotent_classify(a, b).kind == "not-prenilpotent":
                continue
            assert root_interval(a, b).as_set() == root_interval(a, b, method="definition").as_set()


def test_link_rank2_is_identity_like(a2):
    _, al = polygon_labelling(a2)
    lb = link_bijection(al[0], al[2])
    assert lb.bijective and lb.simplex is None
    assert lb.target == lb.source and len(lb.target) == 3


def test_link_a3_sizes(a3):
    sizes = set()
    for a in a3.roots():
        for b in a3.roots():
            cls = prenilpotent_classify(a, b)
            if a != b and cls.kind == "prenilpotent-finite-order" and not cls.nested and cls.order == 3:
                lb = link_bijection(a, b)
                assert lb.bijective
                sizes.add((len(lb.source), len(lb.target)))
    assert sizes == {(2, 2), (3, 3)}


def test_link_octagon():
    W = CoxeterSystem([[1, 4], [4, 1]])
    _, al = polygon_labelling(W)
    lb = link_bijection(al[0], al[3])
    assert lb.bijective and len(lb.source) == len(lb.target) == 4


def test_link_needs_finite_order():
    W = CoxeterSystem([[1, INF], [INF, 1]])
    roots = W.roots(4)
    pair = next((a, b) for a in roots for b in roots
                if a != b and prenilpotent_classify(a, b).kind == "prenilpotent-nested")
    with pytest.raises(CoxeterError):
        link_bijection(*pair)


def test_affine_nested_interval_is_unsupported():
    W = CoxeterSystem([[1, INF], [INF, 1]])
    roots = W.roots(4)
    a, b = next((a, b) for a in roots for b in roots
                if a.reflection != b.reflection and prenilpotent_classify(a, b).kind == "prenilpotent-nested")
    with pytest.raises(CoxeterError):
        root_interval(a, b)


# ----------------------------------------------------------------------
# properties

systems = st.sampled_from([[[1, 3], [3, 1]], [[1, 4], [4, 1]], [[1, 6], [6, 1]], A3, B3])
_cache = {}


def _system(m):
    key = str(m)
    if key not in _cache:
        _cache[key] = CoxeterSystem(m)
    return _cache[key]


@given(systems, st.data())
def test_roots_partition_chambers(m, data):
    W = _system(m)
    a = data.draw(st.sampled_from(W.roots()))
    w = data.draw(st.sampled_from(W.elements))
    assert a.contains(w) != (-a).contains(w)
    assert a.chambers | (-a).chambers == W.full_mask and not a.chambers & (-a).chambers


@given(systems, st.data())
def test_faces_have_bigger_residues(m, data):
    W = _system(m)
    simp = W.simplices()
    s = data.draw(st.sampled_from(simp))
    t = data.draw(st.sampled_from(simp))
    if W.is_face(s, t):
        assert set(W.residue(s)) >= set(W.residue(t))


@given(systems, st.data())
def test_reflection_fixes_its_wall(m, data):
    W = _system(m)
    a = data.draw(st.sampled_from(W.roots()))
    t = a.reflection
    moved = W.act_on_root(t, a)
    assert moved == -a


@given(st.sampled_from([A3, B3]), st.data())
def test_link_preserves_size_and_endpoints(m, data):
    W = _system(m)
    a = data.draw(st.sampled_from(W.roots()))
    b = data.draw(st.sampled_from(W.roots()))
    cls = prenilpotent_classify(a, b)
    if a == b or cls.kind != "prenilpotent-finite-order" or cls.nested:
        return
    lb = link_bijection(a, b)
    assert len(lb.source) == len(lb.target)
    assert lb.mapping[a] == lb.alpha_bar and lb.mapping[b] == lb.beta_bar
