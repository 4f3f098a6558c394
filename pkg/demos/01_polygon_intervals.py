"""Root intervals in the hexagon and the octagon.

The roots of a rank-2 Coxeter complex sit around a 2m-gon.  An interval
[a_0, a_i] walks the polygon from a_0 to a_i, and peeling shortens it one
root at a time.
"""
from wagoner.coxeter import CoxeterSystem, interval_peel, prenilpotent_classify, link_bijection, polygon_labelling, root_interval

for m in (3, 4):
    W = CoxeterSystem([[1, m], [m, 1]])
    order, roots = polygon_labelling(W)
    name = {r: f"a{i}" for i, r in enumerate(roots)}
    print(f"m = {m}: |W| = {W.order}, {len(roots)} roots")
    for i in range(1, m):
        members = root_interval(roots[0], roots[i]).members
        print(f"  [a0, a{i}] =", sorted(name[r] for r in members))

W = CoxeterSystem([[1, 3], [3, 1]])
_, al = polygon_labelling(W)
peel = interval_peel(al[0], al[2])
print("peeling [a0, a2]: a' =", al.index(peel.alpha_prime), " b' =", al.index(peel.beta_prime))
print("peeling [a0, a1] is a singleton step:", interval_peel(al[0], al[1]).singleton)

# in A3 the walls of two roots meet in an edge whose link is a hexagon
A3 = CoxeterSystem([[1, 3, 2], [3, 1, 3], [2, 3, 1]])
roots = A3.roots()
pair = next((a, b) for a in roots for b in roots
            if prenilpotent_classify(a, b).order == 3 and len(root_interval(a, b).members) == 3)
lb = link_bijection(*pair)
print("A3 link map on a 3-root interval, bijective:", lb.bijective, "sizes", len(lb.source), len(lb.target))
