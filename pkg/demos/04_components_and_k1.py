"""Connected components of the Wagoner complex of GL_3(q).

The number of components is the index of the subgroup generated by root
groups, which for GL_n is the size of the determinant group, q - 1.
"""
from wagoner.complexes import build_wagoner
from wagoner.homotopy import components
from wagoner.rootdata import g_dagger_index, instantiate

for q in (2, 3, 4):
    G = instantiate("GL", 3, q)
    cx = build_wagoner(G, skeleton_dim=1)
    print(f"GL_3({q}): {cx.n_vertices:6d} vertices, {components(cx).count} components, "
          f"index of the root-group subgroup {g_dagger_index(G)}")
