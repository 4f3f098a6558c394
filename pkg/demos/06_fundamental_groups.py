"""Fundamental groups from group actions with a strict fundamental domain.

The colimit of vertex and edge stabilisers maps onto the group they generate;
its kernel is the fundamental group.  On the hexagon this kernel is infinite
cyclic, on the 2-sphere it is trivial.
"""
from wagoner.complexes import coxeter_action, coxeter_flag_complex
from wagoner.coxeter import CoxeterSystem
from wagoner.homotopy import pi1_via_action

W = CoxeterSystem([[1, 3], [3, 1]])
hexagon, simp = coxeter_flag_complex(W)
act = coxeter_action(W, hexagon, simp, [(1, 0)])
c0 = next(i for i, s in enumerate(simp) if s.J == () and s.rep == W.identity)
v0 = next(i for i, s in enumerate(simp) if s.J == (0,) and s.rep == W.identity)
res = pi1_via_action(hexagon, act, [c0, v0], cap=2000)
print(f"hexagon: acting group of order {len(act.table)}, colimit {res.status}, "
      f"kernel abelianisation {res.abelianization}")

A3 = CoxeterSystem([[1, 3, 2], [3, 1, 3], [2, 3, 1]])
sphere, simp = coxeter_flag_complex(A3)
act = coxeter_action(A3, sphere, simp)
y = [i for i, s in enumerate(simp) if s.rep == A3.identity]
res = pi1_via_action(sphere, act, y)
print(f"sphere {sphere.f_vector}: colimit order {res.colimit_order}, kernel order {res.kernel_order}")
