"""The acceptance criteria as runnable checks.

Each criterion returns a :class:`CriterionResult` carrying a verdict, the
timing against its budget, a one-line detail and a digest of the artifacts
it computed.  ``verify_suite`` runs a tier and is what ``wagoner verify``
calls.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

from . import affine, complexes, coxeter, homology, homotopy, rootdata
from .export import digest
from .presentation import Presentation, todd_coxeter


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    budget: float
    detail: str
    digest: str
    artifacts: dict = field(default_factory=dict, repr=False)

    @property
    def within_budget(self):
        return self.seconds <= self.budget

    def line(self):
        verdict = "PASS" if self.passed and self.within_budget else "FAIL"
        return (f"[{verdict}] criterion {self.number:2d} {self.title}: {self.detail} "
                f"({self.seconds:.2f}s of {self.budget:g}s)")


@lru_cache(maxsize=None)
def _inst(family, n, q):
    return rootdata.instantiate(family, n, q)


@lru_cache(maxsize=None)
def _wagoner(family, n, q, skel=2):
    return complexes.build_wagoner(_inst(family, n, q), skel)


def clear_caches():
    _inst.cache_clear()
    _wagoner.cache_clear()


def _dihedral(m):
    return coxeter.CoxeterSystem([[1, m], [m, 1]], validate=m != 2)


# ----------------------------------------------------------------------


def polygon_intervals():
    art = {}
    ok = True
    for m in (2, 3, 4, 6):
        W = _dihedral(m)
        _, roots = coxeter.polygon_labelling(W)
        k = 2 * m
        for j in range(k):
            for i in range(1, m):
                got = coxeter.root_interval(roots[j], roots[(j + i) % k], method="definition").as_set()
                ok &= got == {roots[(j + t) % k] for t in range(i + 1)}
        peeled = 0
        for a in W.roots():
            for b in W.roots():
                cls = coxeter.prenilpotent_classify(a, b)
                if a == b or cls.kind == "not-prenilpotent" or cls.nested:
                    continue
                members, steps = coxeter.reconstruct_interval(a, b)
                ok &= set(members) == coxeter.root_interval(a, b).as_set() and steps <= len(members)
                peeled += 1
        art[m] = {"roots": len(roots), "peeled": peeled}
    return ok, f"2m-gon law and peeling for m in (2,3,4,6), pairs peeled {[v['peeled'] for v in art.values()]}", art


def link_bijections():
    art = {}
    ok = True
    for name, mat in (("A3", [[1, 3, 2], [3, 1, 3], [2, 3, 1]]), ("B3", [[1, 4, 2], [4, 1, 3], [2, 3, 1]])):
        W = coxeter.CoxeterSystem(mat)
        sizes = []
        for a in W.roots():
            for b in W.roots():
                cls = coxeter.prenilpotent_classify(a, b)
                if a == b or cls.kind != "prenilpotent-finite-order" or cls.nested:
                    continue
                lb = coxeter.link_bijection(a, b)
                ok &= (lb.bijective and len(lb.source) == len(lb.target)
                       and lb.mapping[a] == lb.alpha_bar and lb.mapping[b] == lb.beta_bar)
                sizes.append(len(lb.source))
        art[name] = {"pairs": len(sizes), "sizes": sorted(sizes)}
    return ok, ", ".join(f"{k}: {v['pairs']} pairs" for k, v in art.items()), art


def _shadow_instances():
    return (("SL", 3, 2), ("SL", 3, 3), ("Sp", 4, 2))


def interval_shadow():
    art = {}
    ok = True
    for spec in _shadow_instances():
        inst = _inst(*spec)
        pairs = rootdata.prenilpotent_pairs(inst, non_nested=True)
        count = 0
        for s in inst.simplices:
            rm = inst._residue_masks[s]
            for a, b in pairs:
                if not rm & a.chambers & b.chambers:
                    continue
                w = rootdata.stabiliser_interval_shadow(inst, s, a, b)
                ok &= w.verified
                count += 1
        art[inst.label] = count
    return ok, "verified witnesses " + ", ".join(f"{k}: {v}" for k, v in art.items()), art


def remark_both_directions():
    art = {}
    ok = True
    for spec in (("SL", 3, 2), ("SL", 3, 3), ("Sp", 4, 2), ("Sp", 4, 3)):
        inst = _inst(*spec)
        W = inst.coxeter
        U = {s: inst.U(s) for s in inst.simplices}
        checked = 0
        for s in inst.simplices:
            for t in inst.simplices:
                ok &= W.is_face(s, t) == (U[s] <= U[t])
                checked += 1
        trivial = all(len(U[s].intersection_keys(inst.N)) == 1 for s in inst.simplices if len(s.J) == 0)
        ok &= trivial
        art[inst.label] = {"pairs": checked, "chamber_meets_N_trivially": trivial}
    return ok, "face order matches subgroup order on " + ", ".join(art), art


def pi0_theorem():
    art = {}
    ok = True
    for q in (2, 3, 4):
        inst = _inst("GL", 3, q)
        comps = homotopy.components(complexes.build_wagoner(inst, 1)).count
        index = rootdata.g_dagger_index(inst)
        art[q] = (comps, index)
        ok &= comps == index == q - 1
    return ok, "components/index " + ", ".join(f"q={q}: {c}/{i}" for q, (c, i) in art.items()), art


def product_decomposition():
    art = {}
    ok = True
    for spec in _shadow_instances():
        inst = _inst(*spec)
        pairs = rootdata.prenilpotent_pairs(inst)
        good = sum(rootdata.product_decomposition_check(inst, a, b) for a, b in pairs)
        ok &= good == len(pairs)
        art[inst.label] = (good, len(pairs))
    return ok, ", ".join(f"{k}: {g}/{n}" for k, (g, n) in art.items()), art


def solomon_tits():
    inst = _inst("SL", 3, 2)
    Wc = _wagoner("SL", 3, 2)
    flag = complexes.build_building_flag(inst)
    delta = complexes.building_complex(inst)
    h1 = homology.homology(flag, 1)
    chi = delta.count(0) - delta.count(1)
    surj = homology.induced_homology_map(complexes.projection(inst, Wc, "building", flag), 1).surjective
    ok = h1.free_rank == 8 and not h1.torsion and chi == -7 and flag.euler_characteristic == -7 and surj
    art = {"H1": h1.invariants(), "delta_f": delta.f_vector, "flag_f": flag.f_vector, "surjective": surj}
    return ok, f"H_1(Flag Δ) = {h1}, V-E = {chi}, H_1(p_Δ) surjective: {surj}", art


def n_action():
    art = {}
    ok = True
    notes = []
    for q in (2, 3):
        inst = _inst("SL", 3, q)
        rep = complexes.n_action_quotient(inst, _wagoner("SL", 3, q))
        sizes_ok = set(rep.orbit_sizes) == {inst.N.order}
        ok &= rep.free and sizes_ok and rep.isomorphic
        art[inst.label] = {"free": rep.free, "orbit_sizes": dict(rep.orbit_sizes),
                           "quotient_f": rep.quotient.f_vector, "target_f": rep.target.f_vector,
                           "isomorphic": rep.isomorphic}
        notes.append(f"{inst.label}: free={rep.free}, |orbit|=|N|={sizes_ok}, iso={rep.isomorphic} "
                     f"(quotient f={rep.quotient.f_vector} vs target f={rep.target.f_vector})")
    return ok, "; ".join(notes), art


def steinberg_equivalences(cap=None):
    art = {}
    ok = True
    for q in (2, 3):
        inst = _inst("SL", 3, q)
        orders = {v: homotopy.steinberg_order(inst, v, cap) for v in ("all-prenilpotent", "non-nested-only")}
        rep = homotopy.tilde_g_checks(inst, cap)
        complete = all(o.status == "complete" for o in orders.values()) and rep.g_tilde.status == "complete"
        agree = len({o.order for o in orders.values()} | {rep.g_tilde.order}) == 1
        ok &= complete and agree and rep.subsystems_ok and rep.orders_agree
        art[inst.label] = {"orders": {k: o.order for k, o in orders.items()}, "g_tilde": rep.g_tilde.order,
                           "subsystems": sorted(rep.subsystems.values())}
    return ok, ", ".join(f"{k}: |Ĝ|={v['orders']['all-prenilpotent']}, |G̃|={v['g_tilde']}"
                         for k, v in art.items()), art


def main_pi1(cap=1_000_000):
    inst = _inst("SL", 4, 2)
    Wc = _wagoner("SL", 4, 2)
    res = homotopy.pi1_wagoner(inst, Wc, cap=cap)
    col, ep = res["stabilizer-colimit"], res["edge-path"]
    if ep.status == "complete" and col.status == "complete":
        ok = col.kernel_order == ep.kernel_order
        how = "orders"
    else:
        ok = col.status == "complete" and getattr(ep, "h1_matches", False)
        how = "abelianization vs H_1"
    art = {"kernel": col.kernel_order, "g_tilde": col.colimit_order, "edge_path": ep.kernel_order,
           "f": Wc.f_vector}
    return ok, (f"SL_4(2): colimit kernel order {col.kernel_order}, edge-path π1 order {ep.kernel_order} "
                f"(compared by {how})"), art


def action_harness(cap=2000):
    W = _dihedral(3)
    flag, simp = complexes.coxeter_flag_complex(W)
    act = complexes.coxeter_action(W, flag, simp, [(1, 0)])
    c0 = next(i for i, s in enumerate(simp) if s.J == () and s.rep == W.identity)
    v0 = next(i for i, s in enumerate(simp) if s.J == (0,) and s.rep == W.identity)
    hexagon = homotopy.pi1_via_action(flag, act, [c0, v0], cap=cap)
    circle = homotopy.edge_path_presentation(flag).presentation.abelian_invariants()
    hex_ok = hexagon.status == "overflow" and hexagon.abelianization == [0] and circle == [0]

    W3 = coxeter.CoxeterSystem([[1, 3, 2], [3, 1, 3], [2, 3, 1]])
    sphere, simp3 = complexes.coxeter_flag_complex(W3)
    act3 = complexes.coxeter_action(W3, sphere, simp3)
    y = [i for i, s in enumerate(simp3) if s.rep == W3.identity]
    s4 = homotopy.pi1_via_action(sphere, act3, y, cap=cap)
    s4_ok = s4.status == "complete" and s4.kernel_order == 1 and s4.group_order == 24
    art = {"hexagon": [hexagon.status, hexagon.abelianization, circle, act.table.shape[0]],
           "sphere": [s4.colimit_order, s4.kernel_order, sphere.f_vector]}
    return hex_ok and s4_ok, (f"dihedral(12) on hexagon: {hexagon.status}, kernel abelianization "
                              f"{hexagon.abelianization} vs circle {circle}; S_4 on sphere: kernel "
                              f"{s4.kernel_order}"), art


def side_condition_flags():
    art = {}
    ok = True
    for spec in (("Sp", 4, 2), ("SL", 3, 2), ("SL", 3, 3), ("SL", 3, 4)):
        inst = _inst(*spec)
        rep = rootdata.side_conditions(inst)
        quotients = sorted(v[2] for v in rep.rank2_orders.values())
        if spec[0] == "Sp":
            ok &= (not rep.co_star) and 720 in quotients
        else:
            ok &= rep.co_star
        art[inst.label] = {"co_star": rep.co_star, "quotients": quotients, "commutator": rep.commutator_ok}
    return ok, ", ".join(f"{k}: Co*={'PASS' if v['co_star'] else 'FAIL'} |X/Z|={v['quotients']} "
                         f"commutator={'PASS' if v['commutator'] else 'FAIL'}" for k, v in art.items()), art


def affine_cells(radius=8):
    art = {}
    ok = True
    for kind in ("A1", "A2"):
        apt = affine.affine_apartment(kind, radius)
        contained = True
        for a, b in ((1, 2), (1, 4), (2, 4)):
            for f in apt.interior_faces():
                try:
                    contained &= affine.divisibility_check(apt, f, a, b)
                except affine.WindowTooSmall:
                    continue
        rescale = {}
        for n in (1, 2, 4):
            r = affine.rescale_iso_check(kind, n, radius)
            rescale[n] = r.bijective and r.order_preserving and r.weyl_equivariant
        composes = affine.compose_check(kind, 1, 2, 4, radius)
        ok &= contained and all(rescale.values()) and composes
        art[kind] = {"contained": contained, "rescale": rescale, "compose": composes}
    return ok, ", ".join(f"{k}: contain={v['contained']} rescale={all(v['rescale'].values())} "
                         f"compose={v['compose']}" for k, v in art.items()), art


def _tc_digest():
    p = Presentation.from_text("generators: a b\na a\nb b b\n" + "a b " * 7 + "\n" + "a^-1 b^-1 a b " * 4)
    return todd_coxeter(p, cap=10_000).digest()


DETERMINISM_PROBES = (1, 2, 4, 6, 7, 11, 12, 13)


def determinism(previous=None):
    """Re-run cheap criteria from cold caches and compare digests."""
    previous = dict(previous or {})
    mismatched = []
    for k in DETERMINISM_PROBES:
        clear_caches()
        again = run_criterion(k, record=False)
        if k not in previous:
            clear_caches()
            previous[k] = run_criterion(k, record=False).digest
        if again.digest != previous[k]:
            mismatched.append(k)
    clear_caches()
    a = complexes.build_wagoner(_inst("SL", 3, 2)).digest()
    clear_caches()
    b = complexes.build_wagoner(_inst("SL", 3, 2)).digest()
    tc_same = _tc_digest() == _tc_digest()
    ok = not mismatched and a == b and tc_same
    return ok, (f"re-ran criteria {list(DETERMINISM_PROBES)}, mismatches {mismatched}; "
                f"Wagoner build digest stable: {a == b}; coset table stable: {tc_same}"), \
        {"probes": {k: previous[k] for k in DETERMINISM_PROBES}, "wagoner": a}


CRITERIA = {
    1: ("2m-gon interval law", polygon_intervals, 1),
    2: ("link bijection", link_bijections, 10),
    3: ("interval shadow", interval_shadow, 120),
    4: ("face order and U_c ∩ N", remark_both_directions, 30),
    5: ("π0 and K_1", pi0_theorem, 300),
    6: ("product decomposition", product_decomposition, 60),
    7: ("Solomon-Tits and projection", solomon_tits, 60),
    8: ("N-action and quotient", n_action, 120),
    9: ("Steinberg equivalences", steinberg_equivalences, 600),
    10: ("main π1 pipeline", main_pi1, 3600),
    11: ("action harness", action_harness, 60),
    12: ("side conditions", side_condition_flags, 120),
    13: ("affine cells", affine_cells, 60),
    14: ("determinism", determinism, 600),
}

TIERS = {"fast": tuple(k for k in CRITERIA if k != 10), "full": tuple(CRITERIA)}

_RECORDED = {}


def run_criterion(number, record=True):
    title, fn, budget = CRITERIA[number]
    start = time.perf_counter()
    if number == 14:
        passed, detail, art = fn(_RECORDED)
    else:
        passed, detail, art = fn()
    seconds = time.perf_counter() - start
    res = CriterionResult(number, title, bool(passed), seconds, budget, detail, digest(art), art)
    if record:
        _RECORDED[number] = res.digest
    return res


def verify_suite(tier="fast", emit=None):
    """Run the criteria of a tier; ``emit`` receives each result line."""
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    results = []
    for k in TIERS[tier]:
        res = run_criterion(k)
        results.append(res)
        if emit is not None:
            emit(res.line())
    return results
