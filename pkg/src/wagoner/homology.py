"""Integral simplicial homology and induced maps."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csc_matrix

from .algebra import smith_normal_form


def boundary_matrix(cx, k):
    """∂_k : C_k -> C_{k-1} as a sparse integer matrix (rows = (k-1)-simplices)."""
    if k <= 0:
        return csc_matrix((0, cx.count(0)), dtype=np.int64)
    if k not in cx.simplices:
        return csc_matrix((cx.count(k - 1), 0), dtype=np.int64)
    top = cx.simplices[k]
    low = cx.simplices[k - 1]
    n = cx.n_vertices
    # index (k-1)-faces by a mixed-radix integer
    weights = n ** np.arange(k - 1, -1, -1, dtype=object) if n ** k > 2 ** 62 else \
        n ** np.arange(k - 1, -1, -1, dtype=np.int64)
    low_codes = (low.astype(weights.dtype) * weights).sum(axis=1)
    order = np.argsort(low_codes)
    sorted_codes = low_codes[order]
    rows, cols, vals = [], [], []
    for i in range(k + 1):
        face = np.delete(top, i, axis=1)
        codes = (face.astype(weights.dtype) * weights).sum(axis=1)
        pos = np.searchsorted(sorted_codes, codes)
        if not np.array_equal(sorted_codes[np.minimum(pos, len(sorted_codes) - 1)], codes):
            raise ValueError("complex is not closed under faces")
        rows.append(order[pos].astype(np.int64))
        cols.append(np.arange(len(top), dtype=np.int64))
        vals.append(np.full(len(top), (-1) ** i, dtype=np.int64))
    return coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(len(low), len(top))).tocsc()


class ChainComplex:
    """Simplicial chain complex with ∂∘∂ = 0 checked on assembly."""

    def __init__(self, cx, top=None):
        self.complex = cx
        top = cx.dimension if top is None else min(top, cx.dimension)
        self.top = top
        self.boundaries = {k: boundary_matrix(cx, k) for k in range(1, top + 1)}
        for k in range(2, top + 1):
            prod = self.boundaries[k - 1] @ self.boundaries[k]
            if prod.count_nonzero():
                raise AssertionError(f"∂{k - 1}∘∂{k} != 0")

    def rank_of(self, k):
        return self.complex.count(k)


@dataclass(frozen=True)
class SNFSummary:
    rank: int
    torsion: tuple      # invariant factors > 1


def sparse_snf(mat):
    """Rank and torsion of an integer sparse matrix.

    Unit pivots are eliminated first (cheapest Markowitz cost first); the
    remaining block, usually tiny, goes to the dense Smith normal form.
    """
    mat = coo_matrix(mat)
    rows = {}
    cols = {}
    for r, c, v in zip(mat.row.tolist(), mat.col.tolist(), mat.data.tolist()):
        if v:
            rows.setdefault(r, {})[c] = rows.get(r, {}).get(c, 0) + v
    for r, row in rows.items():
        for c, v in list(row.items()):
            if v == 0:
                del row[c]
            else:
                cols.setdefault(c, set()).add(r)
    rank = 0
    heap = [(len(cols[c]), c) for c in cols]
    heapq.heapify(heap)
    while heap:
        cnt, c = heapq.heappop(heap)
        if c not in cols or len(cols[c]) != cnt:
            if c in cols and cols[c]:
                heapq.heappush(heap, (len(cols[c]), c))
            continue
        # best unit pivot in this column: shortest row
        best = None
        for r in cols[c]:
            v = rows[r][c]
            if v in (1, -1) and (best is None or len(rows[r]) < len(rows[best])):
                best = r
        if best is None:
            continue
        prow = rows.pop(best)
        pv = prow[c]
        for cc in prow:
            cols[cc].discard(best)
        touched = set()
        for r in list(cols[c]):
            row = rows[r]
            f = row[c] * pv        # pv = ±1 so row[c]/pv = row[c]*pv
            for cc, v in prow.items():
                nv = row.get(cc, 0) - f * v
                if nv:
                    if cc not in row:
                        cols[cc].add(r)
                    row[cc] = nv
                else:
                    if cc in row:
                        del row[cc]
                        cols[cc].discard(r)
            touched.update(row)
        del cols[c]
        for cc in prow:
            if cc != c and cc in cols:
                if not cols[cc]:
                    del cols[cc]
                else:
                    touched.add(cc)
        for cc in touched:
            if cc in cols:
                heapq.heappush(heap, (len(cols[cc]), cc))
        rank += 1
    live_rows = sorted(r for r, row in rows.items() if row)
    live_cols = sorted(c for c, rs in cols.items() if rs)
    if not live_rows or not live_cols:
        return SNFSummary(rank, ())
    ci = {c: j for j, c in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in live_rows]
    for i, r in enumerate(live_rows):
        for c, v in rows[r].items():
            dense[i][ci[c]] = v
    snf = smith_normal_form(dense)
    torsion = tuple(abs(int(d)) for d in snf.factors if abs(int(d)) > 1)
    return SNFSummary(rank + snf.rank, torsion)


@dataclass(frozen=True)
class HomologyGroup:
    k: int
    free_rank: int
    torsion: tuple

    def __str__(self):
        parts = ([f"Z^{self.free_rank}"] if self.free_rank > 1 else ["Z"] * self.free_rank)
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def invariants(self):
        return list(self.torsion) + [0] * self.free_rank


def homology(cx, k, chain=None):
    """H_k(cx; Z) from the Smith normal forms of ∂_k and ∂_{k+1}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > cx.dimension + 1:
        return HomologyGroup(k, 0, ())
    skel = getattr(cx, "skeleton_dim", None)
    if skel is not None and k + 1 > skel and skel < getattr(cx, "poset_height", skel):
        raise ValueError(f"only the {skel}-skeleton is built; H_{k} needs the {k + 1}-skeleton")
    nk = cx.count(k)
    dk = _boundary_summary(cx, k)
    dk1 = _boundary_summary(cx, k + 1) if cx.count(k + 1) else SNFSummary(0, ())
    return HomologyGroup(k, nk - dk.rank - dk1.rank, dk1.torsion)


def _boundary_summary(cx, k):
    if k == 0:
        return SNFSummary(0, ())
    if k == 1:
        # a graph's incidence matrix is totally unimodular: rank = V - components
        from .homotopy import components
        return SNFSummary(cx.n_vertices - components(cx).count, ())
    return sparse_snf(boundary_matrix(cx, k))


def betti_numbers(cx):
    return [homology(cx, k).free_rank for k in range(cx.dimension + 1)]


# ----------------------------------------------------------------------
# induced maps


def chain_map(f, k):
    """Matrix of f_# : C_k(source) -> C_k(target); degenerate simplices go to 0."""
    src, tgt = f.source, f.target
    if k not in src.simplices:
        return csc_matrix((tgt.count(k), 0), dtype=np.int64)
    index = {tuple(r): i for i, r in enumerate(tgt.simplices.get(k, np.zeros((0, k + 1))).tolist())}
    rows, cols, vals = [], [], []
    for j, r in enumerate(src.simplices[k].tolist()):
        img = [int(f.vertex_map[v]) for v in r]
        if len(set(img)) < len(img):
            continue
        perm = np.argsort(img)
        sign = _perm_sign(perm)
        key = tuple(sorted(img))
        if key not in index:
            raise ValueError("map is not simplicial")
        rows.append(index[key])
        cols.append(j)
        vals.append(sign)
    return coo_matrix((vals, (rows, cols)), shape=(tgt.count(k), src.count(k)), dtype=np.int64).tocsc()


def _perm_sign(perm):
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def cycle_basis(cx, k):
    """Integral basis of Z_k as columns of an integer matrix.

    For k = 1 the fundamental cycles of a spanning forest are used; in other
    degrees the right transform of the dense Smith normal form.
    """
    if k == 1:
        return _graph_cycles(cx)
    d = boundary_matrix(cx, k).toarray().tolist()
    if not d or not d[0]:
        return np.eye(cx.count(k), dtype=np.int64)
    snf = smith_normal_form(d, transforms=True)
    right = np.array(snf.right, dtype=object)
    return right[:, snf.rank:].astype(np.int64)


def _graph_cycles(cx):
    edges = cx.edges.tolist()
    eindex = {tuple(e): i for i, e in enumerate(edges)}
    parent = list(range(cx.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adj = [[] for _ in range(cx.n_vertices)]
    non_tree = []
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            non_tree.append((a, b))
        else:
            parent[ra] = rb
            adj[a].append(b)
            adj[b].append(a)
    # BFS tree paths
    up = [-1] * cx.n_vertices
    depth = [0] * cx.n_vertices
    seen = [False] * cx.n_vertices
    for s in range(cx.n_vertices):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        for v in queue:
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    up[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
    basis = np.zeros((len(edges), len(non_tree)), dtype=np.int64)

    def step(col, u, v):
        if u < v:
            basis[eindex[(u, v)], col] += 1
        else:
            basis[eindex[(v, u)], col] -= 1

    for col, (a, b) in enumerate(non_tree):
        step(col, a, b)
        # path b -> a through the tree
        x, y = b, a
        tail = []
        while x != y:
            if depth[x] >= depth[y]:
                step(col, x, up[x])
                x = up[x]
            else:
                tail.append((up[y], y))
                y = up[y]
        for u, v in reversed(tail):
            step(col, u, v)
    return basis


@dataclass
class InducedMapReport:
    k: int
    source_rank: int
    target_rank: int
    image_rank: int
    surjective: bool


def induced_homology_map(f, k):
    """Surjectivity of H_k(f) by checking f_#(Z_k) + B_k spans Z_k(target)."""
    if f.source.dimension < k or f.target.dimension < k:
        raise ValueError("dimension mismatch")
    zs = cycle_basis(f.source, k)
    zt = cycle_basis(f.target, k)
    fm = chain_map(f, k)
    img = fm @ zs
    cols = [img]
    if f.target.count(k + 1):
        cols.append(boundary_matrix(f.target, k + 1).toarray())
    span = np.concatenate(cols, axis=1)
    src_h = homology(f.source, k)
    tgt_h = homology(f.target, k)
    snf = sparse_snf(span.T)     # rows = spanning vectors
    saturated = all(t == 1 for t in snf.torsion)
    boundary_rank = sparse_snf(boundary_matrix(f.target, k + 1)).rank if f.target.count(k + 1) else 0
    image_rank = snf.rank - boundary_rank
    surj = saturated and snf.rank == zt.shape[1]
    return InducedMapReport(k, src_h.free_rank, tgt_h.free_rank, image_rank, surj)


def cycle_image(f, chain, k=1):
    """f_# applied to an integer k-chain given as a dense vector."""
    return chain_map(f, k) @ np.asarray(chain, dtype=np.int64)
