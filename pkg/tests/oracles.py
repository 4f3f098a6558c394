"""Independent reference computations used by the tests.

None of these import the package's own arithmetic: group orders come from
closed formulas and from sympy's Schreier-Sims, intervals from explicit
polygon and permutation models, homology ranks from numpy, components
from networkx.
"""
from itertools import permutations

import networkx as nx
import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup


def prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def order_gl(n, q):
    return prod(q ** n - q ** i for i in range(n))


def order_sl(n, q):
    return order_gl(n, q) // (q - 1)


def order_sp4(q):
    return q ** 4 * (q ** 2 - 1) * (q ** 4 - 1)


# GF(4) = {0, 1, w, w+1} encoded 0..3 with w^2 = w + 1
_GF4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]


def _field_ops(q):
    if q == 4:
        return (lambda a, b: a ^ b), (lambda a, b: _GF4_MUL[a][b])
    return (lambda a, b: (a + b) % q), (lambda a, b: (a * b) % q)


def schreier_sims_order(mats, q):
    """|<mats>| from the permutation action on nonzero vectors of F_q^n."""
    add, mul = _field_ops(q)
    n = len(mats[0])
    vecs = [v for v in np.ndindex(*([q] * n)) if any(v)]
    index = {v: i for i, v in enumerate(vecs)}
    perms = []
    for m in mats:
        img = []
        for v in vecs:
            w = []
            for i in range(n):
                acc = 0
                for j in range(n):
                    acc = add(acc, mul(int(m[i][j]), v[j]))
                w.append(acc)
            img.append(index[tuple(w)])
        perms.append(Permutation(img))
    return PermutationGroup(perms).order()


# ----------------------------------------------------------------------
# Coxeter models


def polygon_roots(m):
    """Roots of the 2m-gon as sets of chambers 0..2m-1 (m consecutive
    chambers each); root i holds chambers i..i+m-1."""
    k = 2 * m
    return [frozenset((i + t) % k for t in range(m)) for i in range(k)]


def interval_by_definition(roots, a, b, chambers):
    ab = a & b
    nab = (chambers - a) & (chambers - b)
    return {g for g in roots if ab <= g and nab <= chambers - g}


def symmetric_roots(n):
    """A_{n-1}: chambers are permutations of 0..n-1, the root (i, j) with
    i < j contains w when w^{-1}(i) < w^{-1}(j); both signs included."""
    chambers = list(permutations(range(n)))
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            pos = frozenset(c for c, w in enumerate(chambers) if w.index(i) < w.index(j))
            out.append(pos)
            out.append(frozenset(range(len(chambers))) - pos)
    return out, frozenset(range(len(chambers)))


def interval_size_histogram(roots, chambers):
    hist = {}
    for a in roots:
        for b in roots:
            if not (a & b) or not ((chambers - a) & (chambers - b)):
                continue
            if a <= b or b <= a:
                continue
            size = len(interval_by_definition(roots, a, b, chambers))
            hist[size] = hist.get(size, 0) + 1
    return hist


# ----------------------------------------------------------------------
# complexes


def n_components(cx):
    g = nx.Graph()
    g.add_nodes_from(range(cx.n_vertices))
    g.add_edges_from(map(tuple, cx.edges.tolist()))
    return nx.number_connected_components(g)


def betti_numbers_q(cx):
    """Rational Betti numbers from dense boundary ranks."""
    ranks = {}
    for k in range(1, cx.dimension + 1):
        rows = {tuple(r): i for i, r in enumerate(cx.simplices[k - 1].tolist())}
        d = np.zeros((len(rows), cx.count(k)))
        for j, r in enumerate(cx.simplices[k].tolist()):
            for i in range(k + 1):
                d[rows[tuple(r[:i] + r[i + 1:])], j] = (-1) ** i
        ranks[k] = np.linalg.matrix_rank(d) if d.size else 0
    return [cx.count(k) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in range(cx.dimension + 1)]
