import numpy as np
import pytest
from hypothesis import given, strategies as st

from wagoner.affine import (GRID, WindowTooSmall, affine_apartment, coarsening_map, compose_check,
                            divisibility_check, in_half_apartment, is_gallery_convex, n_cell,
                            rescale_iso_check, root_system)


def test_line_tessellation():
    apt = affine_apartment("A1", 3)
    assert apt.alcoves.ravel().tolist() == [-3, -2, -1, 0, 1, 2]


def test_a2_window_alcove_count():
    assert len(affine_apartment("A2", 2).alcoves) == 24


def test_bad_inputs():
    with pytest.raises(ValueError):
        root_system("E8")
    with pytest.raises(ValueError):
        affine_apartment("A1", 0)
    apt = affine_apartment("A1", 4)
    with pytest.raises(ValueError):
        divisibility_check(apt, apt.index[(0,)], 2, 3)
    with pytest.raises(ValueError):
        coarsening_map("A1", 2, 3, 4)


def test_half_apartment_membership():
    sysm = root_system("A2")
    point = (GRID // 3, GRID // 3)           # barycentre of the fundamental alcove
    assert in_half_apartment(sysm, point, 2, 0)
    assert not in_half_apartment(sysm, point, 2, 1)
    assert in_half_apartment(sysm, point, 2, 1, sign=-1)


def test_unit_cells_are_closed_alcoves():
    apt = affine_apartment("A2", 4)
    for i in apt.faces_of_dim(2):
        if apt._residue_complete(apt.faces[i]):
            c = n_cell(apt, i, 1)
            assert len(c.alcoves) == 1 and apt.residue(i).tolist() == c.alcoves.tolist()


def test_line_cells():
    apt = affine_apartment("A1", 6)
    v0 = apt.index[(0,)]
    assert n_cell(apt, v0, 1).interval() == (-1, 1)
    assert n_cell(apt, v0, 2).interval() == (-2, 2)
    assert divisibility_check(apt, v0, 1, 2)
    assert divisibility_check(apt, v0, 2, 2)


def test_doubled_triangle():
    apt = affine_apartment("A2", 6)
    cell = n_cell(apt, apt.index[(1, 1, 1)], 2)
    assert len(cell.alcoves) == 4
    assert divisibility_check(apt, apt.index[(1, 1, 1)], 1, 2)


def test_cell_must_fit_window():
    apt = affine_apartment("A1", 2)
    with pytest.raises(WindowTooSmall):
        n_cell(apt, apt.index[(2,)], 4)


def test_rescale_identity():
    rep = rescale_iso_check("A2", 1, 4)
    assert rep.bijective and rep.order_preserving
    apt = affine_apartment("A2", 4)
    for (lo, hi), code in rep.matching.items():
        # at scale one every cell is the residue of the face with this code
        assert n_cell(apt, apt.index[code], 1).key() == (lo, hi)


def test_rescale_line():
    rep = rescale_iso_check("A1", 2, 6)
    assert rep.bijective and rep.order_preserving and rep.weyl_equivariant
    # alcove cells [2k, 2k+2] go to alcoves [k, k+1] of the scaled line
    for (lo, hi), code in rep.matching.items():
        if hi[0] - lo[0] == 2:
            assert code == (lo[0] + 1,)


@pytest.mark.parametrize("kind", ["A2", "C2"])
def test_rescale_rank_two(kind):
    rep = rescale_iso_check(kind, 2, 6)
    assert rep.bijective and rep.order_preserving and rep.weyl_equivariant


def test_coarsening_identity():
    rep = coarsening_map("A1", 2, 2, 6)
    assert rep.well_defined and all(a == b for a, b in rep.vertex_map.values())


def test_coarsening_line():
    rep = coarsening_map("A1", 1, 2, 6)
    assert rep.surjective and rep.contained
    apt = affine_apartment("A1", 6)
    alcove_cells = {n_cell(apt, i, 1).key() for i in apt.faces_of_dim(1) if apt._residue_complete(apt.faces[i])}
    for i in apt.faces_of_dim(1):
        if not apt._residue_complete(apt.faces[i]):
            continue
        try:
            big = n_cell(apt, i, 2)
        except WindowTooSmall:
            continue
        lo, hi = big.interval()
        if hi - lo == 2:
            inside = [k for k in alcove_cells if lo <= k[0][0] and k[1][0] <= hi]
            assert len(inside) == 2
    # base faces that share a 2-cell can have different 1-cells
    assert rep.ambiguous == 6


@pytest.mark.parametrize("kind", ["A1", "A2"])
def test_composition_law(kind):
    assert compose_check(kind, 1, 2, 4, 8)


# ----------------------------------------------------------------------
# properties


def _interior(kind, radius):
    apt = affine_apartment(kind, radius)
    return apt, [i for i in apt.interior_faces()]


_apts = {k: _interior(k, 6) for k in ("A1", "A2", "C2")}


@given(st.sampled_from(["A1", "A2", "C2"]), st.integers(0, 10_000), st.sampled_from([1, 2]))
def test_cells_are_convex_and_divisible(kind, pick, n):
    apt, faces = _apts[kind]
    face = faces[pick % len(faces)]
    try:
        cell = n_cell(apt, face, n)
    except WindowTooSmall:
        return
    assert all(k % n == 0 for _, _, k in cell.half_apartments)
    assert set(apt.residue(face).tolist()) <= set(cell.alcoves.tolist())
    assert is_gallery_convex(apt, cell)


@given(st.sampled_from(["A1", "A2", "C2"]), st.integers(0, 10_000))
def test_cells_grow_with_divisibility(kind, pick):
    apt, faces = _apts[kind]
    face = faces[pick % len(faces)]
    try:
        assert divisibility_check(apt, face, 1, 2)
    except WindowTooSmall:
        pass


@pytest.mark.parametrize("kind,order", [("A1", 2), ("A2", 6), ("C2", 8)])
def test_finite_weyl_permutes_roots(kind, order):
    sysm = root_system(kind)
    assert len(sysm.finite_weyl) == order
    signed = {tuple(r) for r in sysm.roots.tolist()} | {tuple(-r) for r in sysm.roots}
    for w in sysm.finite_weyl:
        # the functional x -> α(x w) has coefficient vector w α
        moved = {tuple(int(v) for v in w @ r) for r in sysm.roots}
        assert moved <= signed and len(moved) == len(sysm.roots)
