"""The Wagoner complex of SL_3(2) next to its building.

378 cosets of the groups U_s, ordered by inclusion.  The standard apartment
is a 12-cycle, and projecting onto the flag complex of the Fano plane is
surjective on H_1.
"""
from wagoner.complexes import build_building_flag, build_wagoner, projection, standard_apartment
from wagoner.homology import homology, induced_homology_map
from wagoner.rootdata import instantiate

G = instantiate("SL", 3, 2)
W = build_wagoner(G)
print(W.name, "f-vector", W.f_vector)

apt = standard_apartment(G, W)
print("standard apartment", apt.complex.f_vector, "H_1 =", homology(apt.complex, 1))

flag = build_building_flag(G)
print(flag.name, "f-vector", flag.f_vector, "H_1 =", homology(flag, 1))

p = projection(G, W, "building")
rep = induced_homology_map(p, 1)
print(f"H_1(W) = {homology(W, 1)}  ->  H_1(Flag) of rank {rep.target_rank}, surjective: {rep.surjective}")
