import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import betti_numbers_q, n_components
from wagoner.complexes import (SimplicialComplex, build_building_flag, build_wagoner, coxeter_flag_complex,
                               projection, standard_apartment)
from wagoner.coxeter import CoxeterSystem
from wagoner.homology import (ChainComplex, betti_numbers, boundary_matrix, cycle_basis, homology,
                              induced_homology_map, sparse_snf)
from wagoner.rootdata import instantiate


def cycle(n):
    return SimplicialComplex.from_maximal(list(range(n)), [(i, (i + 1) % n) for i in range(n)])


def test_triangle_boundary():
    d = boundary_matrix(cycle(3), 1)
    snf = sparse_snf(d)
    assert snf.rank == 2 and snf.torsion == ()
    assert str(homology(cycle(3), 0)) == "Z" and str(homology(cycle(3), 1)) == "Z"


def test_apartment_circle(sl32, w_sl32):
    apt = standard_apartment(sl32, w_sl32).complex
    assert homology(apt, 1).free_rank == 1 and homology(apt, 1).torsion == ()


def test_flag_building_solomon_tits(sl32):
    fd = build_building_flag(sl32)
    assert [str(homology(fd, k)) for k in (0, 1)] == ["Z", "Z^8"]
    assert fd.euler_characteristic == 1 - 8


def test_wagoner_connected(w_sl32):
    assert homology(w_sl32, 0).free_rank == 1 == n_components(w_sl32)


def test_projective_plane_torsion():
    # minimal 6-vertex triangulation of RP^2
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5), (1, 3, 4),
             (2, 4, 5), (1, 3, 5)]
    rp2 = SimplicialComplex.from_maximal(list(range(6)), faces)
    assert rp2.f_vector == [6, 15, 10]
    assert [str(homology(rp2, k)) for k in range(3)] == ["Z", "Z/2", "0"]


def test_sphere_a3():
    W = CoxeterSystem([[1, 3, 2], [3, 1, 3], [2, 3, 1]])
    cx, _ = coxeter_flag_complex(W)
    assert [homology(cx, k).free_rank for k in range(3)] == [1, 0, 1]


def test_skeleton_guard(sl32):
    cx = build_wagoner(instantiate("SL", 4, 2), skeleton_dim=1)
    with pytest.raises(ValueError):
        homology(cx, 1)
    with pytest.raises(ValueError):
        homology(cycle(3), -1)


def test_projection_surjective_on_h1(sl32, w_sl32):
    f = projection(sl32, w_sl32, "building")
    rep = induced_homology_map(f, 1)
    assert rep.surjective and rep.target_rank == 8


def test_apartment_inclusion_not_surjective(sl32, w_sl32):
    from wagoner.complexes import SimplicialMap
    apt = standard_apartment(sl32, w_sl32)
    f = projection(sl32, w_sl32, "building")
    g = SimplicialMap(apt.complex, f.target, f.vertex_map[apt.vertices])
    rep = induced_homology_map(g, 1)
    assert rep.image_rank == 1 and not rep.surjective


def test_induced_map_dimension_mismatch():
    from wagoner.complexes import SimplicialMap
    pt = SimplicialComplex([0], {})
    with pytest.raises(ValueError):
        induced_homology_map(SimplicialMap(pt, cycle(3), np.array([0])), 1)


def test_cycle_basis_are_cycles(w_sl32):
    z = cycle_basis(w_sl32, 1)
    assert z.shape[1] == homology(w_sl32, 1).free_rank
    assert not (boundary_matrix(w_sl32, 1) @ z).any()


# ----------------------------------------------------------------------
# properties


@st.composite
def random_complex(draw):
    n = draw(st.integers(3, 8))
    faces = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=4), min_size=1, max_size=10))
    return SimplicialComplex.from_maximal(list(range(n)), [tuple(sorted(f)) for f in faces])


@given(random_complex())
def test_betti_against_dense_rank(cx):
    assert betti_numbers(cx) == betti_numbers_q(cx)


@given(random_complex())
def test_boundary_squares_to_zero(cx):
    ChainComplex(cx)


@given(random_complex())
def test_h0_counts_components_and_euler(cx):
    hs = [homology(cx, k) for k in range(cx.dimension + 1)]
    assert hs[0].free_rank == n_components(cx)
    assert sum((-1) ** k * h.free_rank for k, h in enumerate(hs)) == cx.euler_characteristic
