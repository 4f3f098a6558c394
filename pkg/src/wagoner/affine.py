"""Cells of affine Coxeter complexes in a bounded window.

Points are written in simple-root coordinates ``x_i = α_i(x)``; a root with
coefficient vector c evaluates to ``c · x``.  Walls are ``α(x) = k`` for
positive roots α and integers k.  Every face of the complex is identified by
its code: for each positive root the integer ``floor(α(x)) + ceil(α(x))``,
which is even on a wall and odd strictly between two walls.

All points used are on the grid (1/12)Z^r; every face of the supported
types has a grid point in its relative interior.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

GRID = 12

_TYPES = {
    "A1": {"roots": [(1,)], "cartan": [[2]]},
    "A2": {"roots": [(1, 0), (0, 1), (1, 1)], "cartan": [[2, -1], [-1, 2]]},
    # alpha_1 short, alpha_2 long
    "C2": {"roots": [(1, 0), (0, 1), (1, 1), (2, 1)], "cartan": [[2, -2], [-1, 2]]},
}
_ALIASES = {"a1": "A1", "ã1": "A1", "a~1": "A1", "affine-a1": "A1",
            "a2": "A2", "ã2": "A2", "a~2": "A2", "affine-a2": "A2",
            "c2": "C2", "c̃2": "C2", "c~2": "C2", "affine-c2": "C2"}


class WindowTooSmall(ValueError):
    pass


def _code(values):
    """floor + ceil of values / GRID, elementwise on integer arrays."""
    return values // GRID - ((-values) // GRID)


@dataclass
class AffineRootSystem:
    kind: str
    roots: np.ndarray        # positive roots as coefficient rows
    cartan: np.ndarray       # cartan[i, j] = <alpha_j, alpha_i^vee>

    @property
    def rank(self):
        return self.roots.shape[1]

    def values(self, points):
        """α(x)·GRID for every positive root at integer grid points."""
        return np.asarray(points, dtype=np.int64) @ self.roots.T

    def reflect(self, i, points):
        """Simple reflection s_i on grid points: x_j -> x_j - cartan[i, j] x_i."""
        p = np.array(points, dtype=np.int64, copy=True)
        xi = p[..., i].copy()
        for j in range(self.rank):
            p[..., j] -= self.cartan[i, j] * xi
        return p

    @cached_property
    def finite_weyl(self):
        """Elements of W_0 as integer matrices acting on coordinate rows."""
        eye = np.eye(self.rank, dtype=np.int64)
        gens = [self.reflect(i, eye) for i in range(self.rank)]
        elems = [eye]
        seen = {eye.tobytes()}
        for g in elems:
            for h in gens:
                m = g @ h
                if m.tobytes() not in seen:
                    seen.add(m.tobytes())
                    elems.append(m)
        return elems


def root_system(kind):
    key = _ALIASES.get(str(kind).lower(), str(kind).upper())
    if key not in _TYPES:
        raise ValueError(f"unsupported affine type {kind!r}; expected A1, A2 or C2")
    d = _TYPES[key]
    return AffineRootSystem(key, np.array(d["roots"], dtype=np.int64), np.array(d["cartan"], dtype=np.int64))


@dataclass
class Face:
    code: tuple
    dim: int
    point: tuple          # interior grid point (coordinates times GRID)


@dataclass
class AffineApartment:
    system: AffineRootSystem
    radius: int
    faces: list                      # sorted by (dim, code)
    alcoves: np.ndarray              # floor vectors of alcoves, rows sorted
    walls: list                      # (root index, k)

    @cached_property
    def index(self):
        return {f.code: i for i, f in enumerate(self.faces)}

    @cached_property
    def alcove_index(self):
        return {tuple(r): i for i, r in enumerate(self.alcoves.tolist())}

    @cached_property
    def alcove_codes(self):
        return 2 * self.alcoves + 1

    def residue(self, face):
        """Indices of alcoves whose closure contains the face."""
        code = np.array(self.faces[face].code if isinstance(face, (int, np.integer)) else face.code)
        return np.flatnonzero((np.abs(self.alcove_codes - code[None]) <= 1).all(axis=1))

    def faces_of_dim(self, d):
        return [i for i, f in enumerate(self.faces) if f.dim == d]

    def is_face(self, i, j):
        """faces[i] lies in the closure of faces[j]."""
        a, b = np.array(self.faces[i].code), np.array(self.faces[j].code)
        # on each root: equal, or a is a wall bounding b's strip
        return bool(((a == b) | ((b % 2 == 1) & (np.abs(a - b) == 1))).all())

    def interior_faces(self):
        """Faces all of whose containing alcoves lie in the window."""
        out = []
        for i, f in enumerate(self.faces):
            if self._residue_complete(f):
                out.append(i)
        return out

    def _residue_complete(self, f):
        code = np.array(f.code)
        r = self.radius
        # an alcove containing f has floors code//2 or (code-1)//2 per root
        lo = (code - 1) // 2
        hi = code // 2
        return bool((lo >= -r).all() and (hi <= r - 1).all())


def affine_apartment(kind, radius, cap=200_000):
    """All alcoves with every positive-root floor in [-radius, radius-1]."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    sysm = root_system(kind)
    r = radius
    span = np.arange(-r * GRID, r * GRID + 1)
    if len(span) ** sysm.rank > cap * GRID:
        raise WindowTooSmall("window exceeds cap")
    pts = np.array(list(product(span, repeat=sysm.rank)), dtype=np.int64)
    vals = sysm.values(pts)
    inside = ((vals >= -r * GRID) & (vals <= r * GRID)).all(axis=1)
    pts, vals = pts[inside], vals[inside]
    codes = _code(vals)
    uniq, first = np.unique(codes, axis=0, return_index=True)
    faces = []
    for code, idx in zip(uniq.tolist(), first.tolist()):
        on_walls = sysm.roots[[i for i, c in enumerate(code) if c % 2 == 0]]
        dim = sysm.rank - (np.linalg.matrix_rank(on_walls) if len(on_walls) else 0)
        faces.append(Face(tuple(code), int(dim), tuple(int(x) for x in pts[idx])))
    faces.sort(key=lambda f: (f.dim, f.code))
    alc = np.array([[(c - 1) // 2 for c in f.code] for f in faces if f.dim == sysm.rank], dtype=np.int64)
    alc = alc[np.lexsort(alc.T[::-1])] if len(alc) else alc
    kmax = r * int(np.abs(sysm.roots).sum(axis=1).max())
    walls = [(i, k) for i in range(len(sysm.roots)) for k in range(-kmax, kmax + 1)]
    return AffineApartment(sysm, r, faces, alc, walls)


def in_half_apartment(sysm, point, root, k, sign=1):
    """Membership of a grid point in {sign·(α(x) - k) >= 0}."""
    v = int(np.dot(sysm.roots[root], point)) - k * GRID
    return sign * v >= 0


@dataclass
class NCell:
    base: int                 # face index in the apartment
    n: int
    lower: tuple              # per positive root: multiple of n
    upper: tuple
    alcoves: np.ndarray       # alcove indices inside the cell
    half_apartments: list = field(default_factory=list)   # (root, sign, k)

    def key(self):
        return (self.lower, self.upper)

    def interval(self):
        """For rank one: the cell as a closed interval."""
        if len(self.lower) != 1:
            raise ValueError("interval() is for rank-one cells")
        return (self.lower[0], self.upper[0])


def _residue_bounds(apt, face):
    res = apt.residue(face)
    floors = apt.alcoves[res]
    return floors.min(axis=0), floors.max(axis=0) + 1


def n_cell(apt, face, n):
    """Intersection of all half-apartments with index divisible by n that
    contain the residue of ``face``."""
    if n < 1:
        raise ValueError("n must be positive")
    if not apt._residue_complete(apt.faces[face]):
        raise WindowTooSmall("residue leaves the window")
    lo, hi = _residue_bounds(apt, face)
    lower = n * np.floor_divide(lo, n)
    upper = -n * np.floor_divide(-hi, n)
    r = apt.radius
    if (lower < -r).any() or (upper > r).any():
        raise WindowTooSmall(f"{n}-cell around face {face} is not inside the window")
    f = apt.alcoves
    inside = ((f >= lower[None]) & (f + 1 <= upper[None])).all(axis=1)
    halves = []
    for i in range(len(lower)):
        halves.append((i, 1, int(lower[i])))
        halves.append((i, -1, int(upper[i])))
    return NCell(face, n, tuple(int(x) for x in lower), tuple(int(x) for x in upper),
                 np.flatnonzero(inside), halves)


def is_gallery_convex(apt, cell):
    """Every alcove between two cell alcoves is in the cell."""
    f = apt.alcoves
    members = f[cell.alcoves]
    lo, hi = members.min(axis=0), members.max(axis=0)
    cand = np.flatnonzero(((f >= lo) & (f <= hi)).all(axis=1))
    inside = set(cell.alcoves.tolist())
    for c in cand:
        if c in inside:
            continue
        between = ((np.minimum(members[:, None], members[None]) <= f[c])
                   & (f[c] <= np.maximum(members[:, None], members[None]))).all(axis=2)
        if between.any():
            return False
    return True


def divisibility_check(apt, face, n, m):
    if m % n:
        raise ValueError(f"{n} does not divide {m}")
    a, b = n_cell(apt, face, n), n_cell(apt, face, m)
    return set(a.alcoves.tolist()) <= set(b.alcoves.tolist())


@dataclass
class RescaleReport:
    kind: str
    n: int
    radius: int
    cells: int
    matching: dict           # cell key -> face code of the scaled complex
    bijective: bool
    order_preserving: bool
    weyl_equivariant: bool


def _all_cells(apt, n):
    cells = {}
    for i in apt.interior_faces():
        try:
            c = n_cell(apt, i, n)
        except WindowTooSmall:
            continue
        cells.setdefault(c.key(), []).append(c)
    return cells


def rescale_iso_check(kind, n, radius):
    """Match the n-cells with the faces of the complex scaled by n."""
    apt = affine_apartment(kind, radius)
    small = affine_apartment(kind, max(1, radius // n))
    cells = _all_cells(apt, n)
    if not cells:
        raise WindowTooSmall("no certified cells in the window")
    by_bounds = {}
    for i in small.interior_faces():
        lo, hi = _residue_bounds(small, i)
        by_bounds[(tuple(int(x) for x in n * lo), tuple(int(x) for x in n * hi))] = i
    matching = {}
    for key in cells:
        if key in by_bounds:
            matching[key] = small.faces[by_bounds[key]].code
    hit = set(matching.values())
    # scaled faces whose n-blown-up residue fits inside the big window
    expected = {small.faces[i].code for (lo, hi), i in by_bounds.items()
                if min(lo) >= -radius and max(hi) <= radius}
    bijective = len(matching) == len(cells) and len(hit) == len(matching) and hit == expected
    keys = list(matching)
    member = np.zeros((len(keys), len(apt.alcoves)), dtype=np.int64)
    for i, k in enumerate(keys):
        member[i, cells[k][0].alcoves] = 1
    # contains[a, b]: cell a contains cell b (bigger cell = smaller face)
    contains = (member @ (1 - member).T).T == 0
    codes = np.array([matching[k] for k in keys], dtype=np.int64)
    a, b = codes[:, None, :], codes[None, :, :]
    face_rel = ((a == b) | ((b % 2 == 1) & (np.abs(a - b) == 1))).all(axis=2)
    order_ok = bool(np.array_equal(contains, face_rel))
    equiv = _weyl_check(apt, n, cells)
    return RescaleReport(apt.system.kind, n, radius, len(cells),
                         {k: v for k, v in sorted(matching.items())}, bijective, order_ok, equiv)


def _weyl_check(apt, n, cells):
    """C_n(w·s) = w·C_n(s) for w in W_0 and faces s."""
    sysm = apt.system
    idx = apt.index
    for w in sysm.finite_weyl:
        for key, group in cells.items():
            c = group[0]
            p = np.array(apt.faces[c.base].point) @ w
            code = tuple(int(x) for x in _code(sysm.values(p[None]))[0])
            if code not in idx:
                continue
            try:
                img = n_cell(apt, idx[code], n)
            except WindowTooSmall:
                continue
            # transform the cell's alcoves
            pts = [np.array(apt.faces[idx[tuple(2 * a + 1)]].point) for a in apt.alcoves[c.alcoves]]
            moved = set()
            for q in pts:
                mc = tuple(int(x) for x in _code(sysm.values((q @ w)[None]))[0])
                moved.add(tuple((np.array(mc) - 1) // 2))
            mine = {tuple(apt.alcoves[a]) for a in img.alcoves.tolist()}
            if moved != mine:
                return False
    return True


@dataclass
class CoarseningReport:
    n: int
    m: int
    vertex_map: dict              # face index -> (m-cell key, n-cell key)
    well_defined: bool            # distinct m-cells have a single n-image
    ambiguous: int
    surjective: bool
    contained: bool               # C_n(s) ⊆ C_m(s) for all s
    contains_counts: dict         # m-cell key -> number of distinct n-cells inside


def coarsening_map(kind, n, m, radius):
    """The cell map C_m(s) -> C_n(s), indexed by the base face s."""
    if m % n:
        raise ValueError(f"{n} does not divide {m}")
    apt = affine_apartment(kind, radius)
    vmap = {}
    contained = True
    for i in apt.interior_faces():
        try:
            cm, cn = n_cell(apt, i, m), n_cell(apt, i, n)
        except WindowTooSmall:
            continue
        vmap[i] = (cm.key(), cn.key())
        contained &= set(cn.alcoves.tolist()) <= set(cm.alcoves.tolist())
    images = {}
    for mk, nk in vmap.values():
        images.setdefault(mk, set()).add(nk)
    ambiguous = sum(1 for v in images.values() if len(v) > 1)
    all_n = {k for k in _all_cells(apt, n)}
    hit = {nk for _, nk in vmap.values()}
    counts = {}
    ncells = _all_cells(apt, n)
    mcells = _all_cells(apt, m)
    for mk, group in mcells.items():
        outer = set(group[0].alcoves.tolist())
        counts[mk] = sum(1 for nk, g in ncells.items() if set(g[0].alcoves.tolist()) <= outer)
    return CoarseningReport(n, m, vmap, ambiguous == 0, ambiguous, hit >= all_n, contained, counts)


def compose_check(kind, a, b, c, radius):
    """For a | b | c: the map C_c -> C_b followed by C_b -> C_a equals the
    map C_c -> C_a on every base face where all three cells exist."""
    if b % a or c % b:
        raise ValueError("need a | b | c")
    cb = coarsening_map(kind, b, c, radius).vertex_map
    ba = coarsening_map(kind, a, b, radius).vertex_map
    ca = coarsening_map(kind, a, c, radius).vertex_map
    common = set(cb) & set(ba) & set(ca)
    if not common:
        raise WindowTooSmall("no face carries all three cells")
    return all(cb[s][1] == ba[s][0] and ba[s][1] == ca[s][1] and cb[s][0] == ca[s][0] for s in common)
