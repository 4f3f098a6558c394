"""n-cells in affine apartments.

An n-cell around a face is cut out by the half-apartments whose wall index
is a multiple of n.  The n-cells tile the plane like the alcoves of the
complex scaled by n.
"""
from wagoner.affine import affine_apartment, n_cell, rescale_iso_check

line = affine_apartment("A1", 6)
origin = line.index[(0,)]
for n in (1, 2, 4):
    print(f"A1, vertex 0: C_{n} = {n_cell(line, origin, n).interval()}")

plane = affine_apartment("A2", 6)
alcove = plane.index[(1, 1, 1)]
for n in (1, 2):
    print(f"A2, fundamental alcove: C_{n} holds {len(n_cell(plane, alcove, n).alcoves)} alcoves")

for kind in ("A1", "A2", "C2"):
    rep = rescale_iso_check(kind, 2, 6)
    print(f"{kind}: {rep.cells} 2-cells match the scaled complex: {rep.bijective and rep.order_preserving}")
