"""Root groups of SL_3(2) and the subgroups U_s.

U_s is generated by the root groups of all roots containing the residue of
s.  Chambers give the upper unitriangular group, vertices a group of order 4.
"""
from wagoner.rootdata import instantiate, side_conditions

G = instantiate("SL", 3, 2)
print(G.label, "order", G.G.order)

for s in G.simplices[:3]:
    print(f"  {s}: |U_s| = {G.U(s).order:2d}, |P_s| = {G.parabolic(s).order:3d}, index {G.index(G.U(s))}")

a0, a1 = G.coxeter.simple_roots()
print("U_a0 =")
print(G.root_group(a0).mats[-1])

rep = side_conditions(G)
print("rank-2 quotient orders:", rep.rank2_orders)
print("commutator condition per simple root:", rep.commutator_condition)

rep = side_conditions(instantiate("Sp4", 4, 2))
print("Sp_4(2):", "Co* holds" if rep.co_star else f"Co* fails on {rep.culprit}")
