"""Fundamental groups of Wagoner complexes and their group-theoretic models.

Two independent routes to π1 are provided.  The combinatorial route builds
the edge-path group of the 2-skeleton and runs coset enumeration on it.  The
group route takes the colimit of the stabiliser system over a strict
fundamental domain and compares its order with the acting group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .coxeter import prenilpotent_classify, root_interval
from .homology import homology
from .presentation import (Presentation, cayley_presentation_table, free_reduce,
                           reidemeister_schreier, tietze_reduce, todd_coxeter)


# ----------------------------------------------------------------------
# components


@dataclass
class Components:
    count: int
    labels: np.ndarray     # component of each vertex, numbered by minimal vertex


def components(cx):
    n = cx.n_vertices
    e = cx.edges
    graph = coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(n, n))
    count, lab = connected_components(graph, directed=False)
    first = np.full(count, n, dtype=np.int64)
    np.minimum.at(first, lab, np.arange(n))
    order = np.argsort(first)
    relabel = np.empty(count, dtype=np.int64)
    relabel[order] = np.arange(count)
    return Components(int(count), relabel[lab])


# ----------------------------------------------------------------------
# edge-path group


@dataclass
class EdgePathPresentation:
    presentation: Presentation
    basepoint: int
    vertices: np.ndarray            # vertices of the basepoint's component
    edge_generator: dict            # (u, v) with u < v -> generator index (non-tree edges)


def edge_path_presentation(cx, basepoint=0):
    """Edge-path group of the 2-skeleton at ``basepoint``.

    Spanning tree by BFS over sorted adjacency; one generator per non-tree
    edge (oriented from smaller to larger vertex), one relator per triangle.
    Only the basepoint's component is used.
    """
    adj = cx.adjacency()
    n = cx.n_vertices
    seen = np.zeros(n, dtype=bool)
    seen[basepoint] = True
    queue = [basepoint]
    tree = set()
    for v in queue:
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
                tree.add((min(v, w), max(v, w)))
    comp = np.flatnonzero(seen)
    gens = {}
    names = []
    for a, b in cx.edges.tolist():
        if seen[a] and (a, b) not in tree:
            gens[(a, b)] = len(names)
            names.append(f"e{a}_{b}")

    def letter(u, v):
        if u < v:
            g = gens.get((u, v))
            return None if g is None else g + 1
        g = gens.get((v, u))
        return None if g is None else -(g + 1)

    rels = []
    for a, b, c in cx.triangles.tolist():
        if not seen[a]:
            continue
        word = [x for x in (letter(a, b), letter(b, c), letter(c, a)) if x is not None]
        rels.append(tuple(word))
    return EdgePathPresentation(Presentation(names, rels), basepoint, comp, gens)


# ----------------------------------------------------------------------
# systems of groups and colimits


@dataclass
class AbstractGroup:
    """A finite group given by its elements (identity first) and product."""

    elements: list
    mul: object

    def __post_init__(self):
        self.index = {e: i for i, e in enumerate(self.elements)}

    @property
    def order(self):
        return len(self.elements)


@dataclass
class GroupSystem:
    """Nodes with injective arrows between them.

    Root-group systems carry ``roots`` (an ordered root tuple per node) and
    ``inst``; abstract systems carry ``AbstractGroup`` nodes and arrows
    ``(i, j, map)`` where ``map`` sends elements of node i into node j.
    """

    nodes: list
    arrows: list
    roots: list | None = None
    inst: object = None
    labels: list = field(default_factory=list)

    def verify(self):
        if self.roots is not None:
            for i, j, *_ in self.arrows:
                if not set(self.roots[i]) <= set(self.roots[j]) or not self.nodes[i] <= self.nodes[j]:
                    raise ValueError(f"arrow {i} -> {j} is not an inclusion")
            return True
        for i, j, mp in self.arrows:
            src, dst = self.nodes[i], self.nodes[j]
            if len(set(mp(a) for a in src.elements)) != src.order:
                raise ValueError(f"arrow {i} -> {j} is not injective")
            for a in src.elements:
                if mp(a) not in dst.index:
                    raise ValueError(f"arrow {i} -> {j} leaves the target")
                for b in src.elements:
                    if mp(src.mul(a, b)) != dst.mul(mp(a), mp(b)):
                        raise ValueError(f"arrow {i} -> {j} is not a homomorphism")
        return True


def _normal_forms(inst, roots):
    """Map group-element key -> parameter tuple for prod_i x_{roots[i]}(t_i)."""
    e = inst.engine
    q = inst.q
    mats = [np.stack([inst.root_element(a, t) for t in range(q)]) for a in roots]
    table = {}
    for params in product(range(q), repeat=len(roots)):
        m = e.identity()
        for a, t in zip(range(len(roots)), params):
            if t:
                m = e.mul(m, mats[a][t])
        table[int(e.encode(m))] = params
    return table


def _root_node_relators(inst, roots, gen_of):
    """Relators presenting U_Ψ on generators x_γ(t), Ψ ordered as given."""
    F = inst.field
    e = inst.engine
    q = inst.q
    rels = []
    for a in roots:
        for t in range(1, q):
            for u in range(1, q):
                s = F.add(t, u)
                word = [gen_of[(a, t)], gen_of[(a, u)]]
                if s:
                    word.append(-gen_of[(a, s)])
                rels.append(tuple(word))
    if len(roots) > 1:
        nf = _normal_forms(inst, roots)
        if len(nf) != inst.subgroup_of_roots(roots).order:
            raise AssertionError("root-group product is not a bijection for this order")
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                for t in range(1, q):
                    for u in range(1, q):
                        m = e.mul(inst.root_element(roots[j], u), inst.root_element(roots[i], t))
                        params = nf[int(e.encode(m))]
                        rhs = [gen_of[(roots[k], c)] for k, c in enumerate(params) if c]
                        rels.append(tuple([gen_of[(roots[j], u)], gen_of[(roots[i], t)]] + [-x for x in reversed(rhs)]))
    return rels


def colimit_presentation(system):
    """Presentation of the colimit of a verified system of groups."""
    system.verify()
    if system.roots is not None:
        inst = system.inst
        all_roots = sorted({a for rs in system.roots for a in rs}, key=lambda r: r.sort_key())
        gen_of, names = {}, []
        for a in all_roots:
            for t in range(1, inst.q):
                gen_of[(a, t)] = len(names) + 1
                names.append(f"x[{a!r},{t}]")
        rels, seen = [], set()
        for rs in system.roots:
            for r in _root_node_relators(inst, list(rs), gen_of):
                r = free_reduce(r)
                if r and r not in seen:
                    seen.add(r)
                    rels.append(r)
        labels = {gen_of[k] - 1: inst.root_element(k[0], k[1]) for k in gen_of}
        return Presentation(names, rels, labels)
    gen_of, names = {}, []
    for i, g in enumerate(system.nodes):
        for a in g.elements[1:]:
            gen_of[(i, a)] = len(names) + 1
            names.append(f"g{i}[{len(names)}]")

    def letter(i, a):
        return gen_of.get((i, a))

    rels = []
    for i, g in enumerate(system.nodes):
        for a in g.elements[1:]:
            for b in g.elements[1:]:
                c = g.mul(a, b)
                word = [letter(i, a), letter(i, b)]
                if c != g.elements[0]:
                    word.append(-letter(i, c))
                rels.append(tuple(word))
    for i, j, mp in system.arrows:
        for a in system.nodes[i].elements[1:]:
            rels.append((letter(i, a), -letter(j, mp(a))))
    labels = {gen_of[k] - 1: k for k in gen_of}
    return Presentation(names, rels, labels)


def root_system_for(inst, root_sets, order_roots=True):
    """GroupSystem over the given root sets with all inclusion arrows."""
    sets = []
    seen = set()
    for rs in root_sets:
        key = frozenset(rs)
        if key in seen:
            continue
        seen.add(key)
        sets.append(tuple(sorted(rs, key=lambda r: r.sort_key())) if order_roots else tuple(rs))
    nodes = [inst.subgroup_of_roots(rs) for rs in sets]
    arrows = [(i, j) for i in range(len(sets)) for j in range(len(sets))
              if i != j and set(sets[i]) < set(sets[j])]
    return GroupSystem(nodes, arrows, roots=sets, inst=inst)


def steinberg_system(inst, variant="all-prenilpotent", restrict_to=None):
    """System of U_α and U_[α,β] over prenilpotent pairs (non-nested only
    for ``variant="non-nested-only"``), optionally restricted to roots in
    ``restrict_to``."""
    if variant not in ("all-prenilpotent", "non-nested-only"):
        raise ValueError("variant must be all-prenilpotent or non-nested-only")
    roots = inst.roots if restrict_to is None else [a for a in inst.roots if a in set(restrict_to)]
    rset = set(roots)
    sets = [(a,) for a in roots]
    for a in roots:
        for b in roots:
            if a == b or a == -b:
                continue
            cls = prenilpotent_classify(a, b)
            if cls.kind == "not-prenilpotent":
                continue
            if variant == "non-nested-only" and cls.nested:
                continue
            members = root_interval(a, b).members
            if all(m in rset for m in members):
                sets.append(tuple(members))
    return root_system_for(inst, sets)


@dataclass
class OrderResult:
    order: int | None
    status: str              # "complete" or "overflow"
    cap: int
    ngens: int
    nrels: int


def presentation_order(pres, cap=None, reduce=True):
    p = tietze_reduce(pres).presentation if reduce else pres
    table = todd_coxeter(p, (), cap)
    return OrderResult(table.index, table.status, table.cap, p.ngens, len(p.relators))


def steinberg_order(inst, variant="all-prenilpotent", cap=None):
    """|Ĝ| by coset enumeration on the colimit presentation."""
    pres = colimit_presentation(steinberg_system(inst, variant))
    return presentation_order(pres, cap)


def u_system(inst):
    """The system {U_s : s co-spherical} with inclusion arrows."""
    sets = [tuple(inst.roots_containing(s)) for s in inst.simplices if s.cospherical]
    return root_system_for(inst, sets)


@dataclass
class TildeGReport:
    g_tilde: OrderResult
    g_hat: OrderResult
    orders_agree: bool
    subsystems: dict           # simplex -> (colimit order, |U_s|)
    chamber_ok: bool

    @property
    def subsystems_ok(self):
        return all(a == b for a, b in self.subsystems.values())


def tilde_g_checks(inst, cap=None, simplices=None):
    """|G̃| = |Ĝ|, and each subsystem colimit has order |U_s|."""
    gt = presentation_order(colimit_presentation(u_system(inst)), cap)
    gh = steinberg_order(inst, "all-prenilpotent", cap)
    subs = {}
    targets = inst.simplices if simplices is None else simplices
    for s in targets:
        if not s.cospherical:
            continue
        roots = inst.roots_containing(s)
        res = presentation_order(colimit_presentation(steinberg_system(inst, "non-nested-only", roots)), cap)
        subs[s] = (res.order, inst.U(s).order)
    chamber = [v for s, v in subs.items() if len(s.J) == 0]
    chamber_ok = bool(chamber) and all(a == b for a, b in chamber)
    return TildeGReport(gt, gh, gt.order is not None and gt.order == gh.order, subs, chamber_ok)


# ----------------------------------------------------------------------
# Theorem-5.1 style harness


@dataclass
class Pi1Result:
    method: str
    colimit_order: int | None
    group_order: int | None           # |G_0| or |G†|
    kernel_order: int | None
    abelianization: list | None       # invariants of the kernel, 0 = Z summand
    components: int | None = None
    status: str = "complete"
    label: str = ""
    notes: list = field(default_factory=list)


def _perm_mul(a, b):
    # apply a then b
    return tuple(b[i] for i in a)


def _perm_closure(gens, identity):
    elems = [identity]
    seen = {identity}
    for g in elems:
        for h in gens:
            x = _perm_mul(g, h)
            if x not in seen:
                seen.add(x)
                elems.append(x)
    return elems


def pi1_via_action(cx, action, y_vertices, cap=None):
    """Kernel of colim{G_σ : σ ⊆ Y} -> G_0 for a strict fundamental domain Y.

    Preconditions (Y meets each orbit once, Y connected and simply
    connected) are checked and raise ``ValueError`` when violated.
    """
    table = action.table
    perms = [tuple(int(x) for x in row) for row in table]
    identity = tuple(range(cx.n_vertices))
    if perms[0] != identity:
        raise ValueError("first group element must act trivially")
    if len(set(perms)) != len(perms):
        raise ValueError("action is not faithful")
    y_sub, y_verts = cx.induced(y_vertices, name="Y")
    yset = set(int(v) for v in y_verts)
    orbit = table.min(axis=0)
    hits = {}
    for v in yset:
        hits[int(orbit[v])] = hits.get(int(orbit[v]), 0) + 1
    if set(hits.values()) != {1} or len(hits) != len(set(orbit.tolist())):
        raise ValueError("Y is not a strict fundamental domain (vertex orbits)")
    for k in range(1, cx.dimension + 1):
        orbits_k = set()
        imgs = {}
        for r in cx.simplices[k].tolist():
            key = min(tuple(sorted(p[v] for v in r)) for p in perms)
            orbits_k.add(key)
        for r in y_sub.simplices.get(k, np.zeros((0, k + 1), dtype=int)).tolist():
            orig = tuple(int(y_verts[v]) for v in r)
            key = min(tuple(sorted(p[v] for v in orig)) for p in perms)
            imgs[key] = imgs.get(key, 0) + 1
        if set(imgs) != orbits_k or set(imgs.values()) - {1}:
            raise ValueError(f"Y is not a strict fundamental domain ({k}-simplices)")
    comp = components(y_sub)
    if comp.count != 1:
        raise ValueError("Y is not connected")
    ep = edge_path_presentation(y_sub, 0)
    if ep.presentation.ngens:
        t = todd_coxeter(tietze_reduce(ep.presentation).presentation, (), cap)
        if not (t.complete and t.index == 1):
            raise ValueError("Y is not simply connected")
    # stabiliser system over the vertices of Y, glued along edges
    def stab(vs):
        return [p for p in perms if all(p[v] == v for v in vs)]

    yv = sorted(yset)
    nodes = [AbstractGroup(stab([v]), _perm_mul) for v in yv]
    arrows = []
    for a, b in y_sub.edges.tolist():
        va, vb = int(y_verts[a]), int(y_verts[b])
        common = stab([va, vb])
        edge_node = len(nodes)
        nodes.append(AbstractGroup(common, _perm_mul))
        arrows.append((edge_node, yv.index(va), lambda x: x))
        arrows.append((edge_node, yv.index(vb), lambda x: x))
    system = GroupSystem(nodes, arrows)
    pres = colimit_presentation(system)
    gens0 = sorted({p for g in nodes for p in g.elements[1:]})
    g0 = _perm_closure(gens0, identity) if gens0 else [identity]
    n_components = len(perms) // len(g0)
    red = tietze_reduce(pres)
    t = todd_coxeter(red.presentation, (), cap)
    if t.complete:
        kernel = t.index // len(g0)
        ab = [] if kernel == 1 else None
        if kernel != 1:
            ab = _kernel_abelianization(pres, g0)
        return Pi1Result("stabilizer-colimit", t.index, len(g0), kernel, ab, n_components)
    ab = _kernel_abelianization(pres, g0)
    return Pi1Result("stabilizer-colimit", None, len(g0), None, ab, n_components, status="overflow",
                     notes=[f"coset enumeration overflowed at {t.cap}; kernel abelianization {ab}"])


def _kernel_abelianization(pres, g0):
    """Abelian invariants of ker(colimit -> G_0) via Reidemeister-Schreier."""
    index = {g: i for i, g in enumerate(g0)}
    perms = []
    for i in range(pres.ngens):
        node, elem = pres.labels[i]
        perms.append(np.array([index[_perm_mul(g, elem)] for g in g0]))
    table = cayley_presentation_table(perms)
    sub = reidemeister_schreier(pres, table)
    red = tietze_reduce(sub).presentation
    return red.abelian_invariants()


# ----------------------------------------------------------------------
# π1 of the Wagoner complex


def pi1_wagoner(inst, wagoner=None, cap=None, edge_path=True, compare_homology=True):
    """π1 of the Wagoner complex by the stabiliser colimit and the edge path.

    The colimit of {U_s} over the apartment gives |G̃|, and the kernel
    order is |G̃| / |G†|.  The edge-path group of the 2-skeleton is reduced
    and enumerated independently; its abelianisation is compared with H_1.
    """
    from .complexes import build_wagoner

    rank = inst.coxeter.rank
    label = "" if rank >= 3 else "outside theorem hypothesis (rank 2 spherical)"
    gt = presentation_order(colimit_presentation(u_system(inst)), cap)
    gdag = inst.G_dagger.order
    kernel = gt.order // gdag if gt.order is not None else None
    results = {"stabilizer-colimit": Pi1Result("stabilizer-colimit", gt.order, gdag, kernel, None,
                                               status=gt.status, label=label)}
    if edge_path:
        Wc = wagoner if wagoner is not None else build_wagoner(inst, 2)
        comp = components(Wc)
        base = int(Wc.vertex_of(0, int(inst.G.index_of(inst.engine.identity()[None])[0])))
        ep = edge_path_presentation(Wc, base)
        red = tietze_reduce(ep.presentation).presentation
        t = todd_coxeter(red, (), cap)
        ab = red.abelian_invariants() if red.ngens <= 2000 else None
        res = Pi1Result("edge-path", None, None, t.index if t.complete else None, ab, comp.count,
                        status=t.status, label=label,
                        notes=[f"reduced to {red.ngens} generators, {len(red.relators)} relators"])
        if compare_homology and ab is not None:
            h1 = homology(Wc, 1)
            res.notes.append(f"H_1 = {h1}; matches abelianization: {sorted(h1.invariants()) == sorted(ab)}")
            res.h1_matches = sorted(h1.invariants()) == sorted(ab)
        results["edge-path"] = res
    return results
