"""Steinberg-type groups as colimits, counted by coset enumeration.

Two systems of unipotent groups give the same colimit: one uses every
prenilpotent pair of roots, the other only the non-nested ones.  A third
colimit runs over the groups U_s.
"""
from wagoner.homotopy import steinberg_order, tilde_g_checks
from wagoner.rootdata import instantiate

for q in (2, 3):
    G = instantiate("SL", 3, q)
    full = steinberg_order(G, "all-prenilpotent")
    thin = steinberg_order(G, "non-nested-only")
    rep = tilde_g_checks(G)
    print(f"SL_3({q}): |G| = {G.G.order}, all pairs {full.order}, non-nested {thin.order}, "
          f"over U_s {rep.g_tilde.order}")
    print(f"  each U_s recovered from its own subsystem: {rep.subsystems_ok}")
