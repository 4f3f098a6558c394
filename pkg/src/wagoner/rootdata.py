"""Finite groups with root data: SL_n(q), GL_n(q) and Sp_4(q).

Matrices are stacked numpy integer arrays whose entries are the field's
integer encodings.  A matrix is keyed by the integer obtained from reading
its entries row-major as base-q digits, so key order is the row-major
lexicographic order of matrices; subgroups are sorted key arrays.

Root groups are built once for the simple roots and transported to every
other root by conjugating with canonical Weyl lifts ``n_w``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import FiniteField, mat_det, mat_inv
from .coxeter import CoxeterSystem, prenilpotent_classify, root_interval

DEFAULT_GROUP_CAP = 500_000

# Coxeter matrices for the shipped families
_A = {n: [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(n - 1)]
          for i in range(n - 1)] for n in range(3, 7)}
_C2 = [[1, 4], [4, 1]]

# |X/Z| for the rank-2 groups excluded by condition (Co*)
EXCLUDED_RANK2 = {720: "B_2(2)", 12096: "G_2(2)", 4245696: "G_2(3)", 17971200: "2F_4(2)"}


class GroupCapExceeded(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"group enumeration exceeded cap of {cap} elements")
        self.cap = cap


def field_for_order(q):
    table = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}
    if q not in table:
        raise ValueError(f"unsupported field order {q}; expected one of 2, 3, 4, 5")
    return FiniteField(*table[q])


class MatrixEngine:
    """Vectorised arithmetic on stacks of n x n matrices over a finite field."""

    def __init__(self, field, n):
        self.field = field
        self.n = n
        self.q = field.q
        self._weights = np.array([self.q ** (n * n - 1 - i) for i in range(n * n)], dtype=np.int64)

    def encode(self, mats):
        mats = np.asarray(mats, dtype=np.int64)
        return mats.reshape(mats.shape[:-2] + (self.n * self.n,)) @ self._weights

    def decode(self, keys):
        keys = np.atleast_1d(np.asarray(keys, dtype=np.int64))
        digits = (keys[:, None] // self._weights[None, :]) % self.q
        return digits.reshape(-1, self.n, self.n)

    def mul(self, a, b):
        return self.field.batch_matmul(a, b)

    def identity(self):
        return np.eye(self.n, dtype=np.int64)

    def as_array(self, m):
        return np.asarray(m, dtype=np.int64).reshape(self.n, self.n)

    def as_tuple(self, m):
        return tuple(tuple(int(x) for x in row) for row in np.asarray(m).reshape(self.n, self.n))

    def inv(self, m):
        return self.as_array(mat_inv(self.field, self.as_tuple(m)))

    def det(self, m):
        return mat_det(self.field, self.as_tuple(m))

    def power(self, mats, e):
        mats = np.asarray(mats, dtype=np.int64)
        result = np.broadcast_to(self.identity(), mats.shape).copy()
        base = mats
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def closure(self, gens, cap=DEFAULT_GROUP_CAP):
        """Sorted keys and matrices of the group generated by ``gens``."""
        gens = np.asarray(gens, dtype=np.int64).reshape(-1, self.n, self.n)
        ident = self.identity()[None]
        known = self.encode(ident)
        known_mats = ident
        frontier = ident
        while len(frontier):
            prods = self.mul(frontier[:, None], gens[None]).reshape(-1, self.n, self.n)
            keys = self.encode(prods)
            uniq, first = np.unique(keys, return_index=True)
            fresh = ~np.isin(uniq, known, assume_unique=True)
            frontier = prods[first[fresh]]
            if len(frontier):
                known = np.concatenate([known, uniq[fresh]])
                known_mats = np.concatenate([known_mats, frontier])
                if len(known) > cap:
                    raise GroupCapExceeded(cap)
        order = np.argsort(known)
        return known[order], known_mats[order]


class FinSubgroup:
    """A finite matrix group stored as its complete, sorted element list."""

    def __init__(self, engine, keys, mats=None, gens=None, name=""):
        self.engine = engine
        self.keys = np.asarray(keys, dtype=np.int64)
        self._mats = mats
        self.gens = None if gens is None else np.asarray(gens, dtype=np.int64).reshape(-1, engine.n, engine.n)
        self.name = name

    @classmethod
    def generated(cls, engine, gens, name="", cap=DEFAULT_GROUP_CAP):
        gens = np.asarray(gens, dtype=np.int64).reshape(-1, engine.n, engine.n)
        if len(gens) == 0:
            keys, mats = engine.encode(engine.identity()[None]), engine.identity()[None]
        else:
            keys, mats = engine.closure(gens, cap)
        return cls(engine, keys, mats, gens if len(gens) else engine.identity()[None], name)

    @property
    def mats(self):
        if self._mats is None:
            self._mats = self.engine.decode(self.keys)
        return self._mats

    @property
    def order(self):
        return int(len(self.keys))

    def __len__(self):
        return self.order

    @cached_property
    def canonical_key(self):
        digest = hashlib.sha256(self.keys.tobytes()).hexdigest()[:16]
        return f"{self.order}:{digest}"

    def __eq__(self, other):
        return isinstance(other, FinSubgroup) and np.array_equal(self.keys, other.keys)

    def __hash__(self):
        return hash(self.canonical_key)

    def __le__(self, other):
        return bool(np.isin(self.keys, other.keys, assume_unique=True).all())

    def contains_keys(self, keys):
        keys = np.atleast_1d(np.asarray(keys, dtype=np.int64))
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        return self.keys[pos] == keys

    def __contains__(self, g):
        return bool(self.contains_keys(self.engine.encode(self.engine.as_array(g)))[0])

    def index_of(self, mats):
        keys = self.engine.encode(mats)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        if not (self.keys[pos] == keys).all():
            raise ValueError("element not in group")
        return pos

    def intersection_keys(self, other):
        return np.intersect1d(self.keys, other.keys, assume_unique=True)

    def generators(self):
        return self.gens if self.gens is not None else self.mats

    def __repr__(self):
        return f"FinSubgroup({self.name or '?'}, order={self.order})"


def subgroup_from_keys(engine, keys, name=""):
    keys = np.unique(np.asarray(keys, dtype=np.int64))
    return FinSubgroup(engine, keys, name=name)


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CosetPartition:
    """Left cosets gU of U in G: ``labels[i]`` is the coset of G's i-th element."""

    labels: np.ndarray
    reps: np.ndarray      # index (into G) of the minimal element of each coset

    @property
    def count(self):
        return len(self.reps)


def left_cosets(G, U):
    """Partition G into left cosets of U (labels ordered by minimal element)."""
    n = G.order
    gens = U.generators()
    if U.order == 1:
        return CosetPartition(np.arange(n), np.arange(n))
    rows, cols = [], []
    for u in gens:
        j = G.index_of(G.engine.mul(G.mats, u))
        rows.append(np.arange(n))
        cols.append(j)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    ncomp, comp = connected_components(graph, directed=True, connection="weak")
    first = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    order = np.argsort(first)
    relabel = np.empty(ncomp, dtype=np.int64)
    relabel[order] = np.arange(ncomp)
    return CosetPartition(relabel[comp], first[order])


# ----------------------------------------------------------------------


class RootDatumInstance:
    """A concrete group with root datum over F_q.

    ``family`` is ``"SL"``, ``"GL"`` or ``"Sp4"``.  For SL/GL the Coxeter
    system is A_{n-1} with generator i the transposition (i, i+1); for Sp4
    it is C_2 with generator 0 the short and generator 1 the long simple
    root (symplectic form antidiag(1, 1, -1, -1)).
    """

    def __init__(self, family, n, q, cap=DEFAULT_GROUP_CAP):
        family = {"sl": "SL", "gl": "GL", "sp4": "Sp4", "sp": "Sp4"}.get(str(family).lower())
        if family is None:
            raise ValueError("family must be SL, GL or Sp4")
        if family in ("SL", "GL") and not 3 <= n <= 6:
            raise ValueError("SL/GL need 3 <= n <= 6 (rank >= 2)")
        if family == "Sp4" and n != 4:
            raise ValueError("Sp4 needs n = 4")
        self.family = family
        self.n = n
        self.q = q
        self.cap = cap
        self.field = field_for_order(q)
        self.engine = MatrixEngine(self.field, n)
        self.coxeter = CoxeterSystem(_C2 if family == "Sp4" else _A[n])
        self._simple = [self._simple_root_matrices(s) for s in range(self.coxeter.rank)]
        self._verify_simple_data()

    def __repr__(self):
        return f"RootDatumInstance({self.family}, n={self.n}, q={self.q})"

    @property
    def label(self):
        return f"{self.family}_{self.n}({self.q})" if self.family != "Sp4" else f"Sp_4({self.q})"

    # ------------------------------------------------------------------
    # simple root data

    def _unit(self, i, j, t):
        m = np.eye(self.n, dtype=np.int64)
        m[i, j] = t
        return m

    def _sp4_candidates(self, s):
        if s == 0:  # short root e1 - e2 pairs E12 with E34
            return [((0, 1), (2, 3))]
        return [((1, 2),)]

    def _sp4_matrix(self, spots, signs, t):
        F = self.field
        m = np.eye(4, dtype=np.int64)
        for (i, j), sg in zip(spots, signs):
            m[i, j] = t if sg > 0 else F.neg(t)
        return m

    @cached_property
    def symplectic_form(self):
        F = self.field
        om = np.zeros((4, 4), dtype=np.int64)
        om[0, 3] = om[1, 2] = 1
        om[2, 1] = om[3, 0] = F.neg(1)
        return om

    def is_symplectic(self, m):
        om = self.symplectic_form
        lhs = self.engine.mul(self.engine.mul(np.asarray(m).T, om), m)
        return np.array_equal(lhs, om)

    def _simple_root_matrices(self, s):
        """(x_s, x_{-s}) as functions of an encoded field element."""
        if self.family in ("SL", "GL"):
            return (lambda t, s=s: self._unit(s, s + 1, t),
                    lambda t, s=s: self._unit(s + 1, s, t))
        spots = self._sp4_candidates(s)[0]
        for signs in product((1, -1), repeat=len(spots)):
            if all(self.is_symplectic(self._sp4_matrix(spots, signs, t)) for t in range(self.q)):
                break
        else:
            raise AssertionError("no symplectic root group found")
        return (lambda t, sp=spots, sg=signs: self._sp4_matrix(sp, sg, t),
                lambda t, sp=spots, sg=signs: self._sp4_matrix(sp, sg, t).T.copy())

    def _verify_simple_data(self):
        for s in range(self.coxeter.rank):
            n_s = self.simple_lift(s)
            if self.family == "Sp4" and not self.is_symplectic(n_s):
                raise AssertionError("Weyl lift is not symplectic")
        # lifts of a word project consistently: n_x n_y in n_{xy} H
        W = self.coxeter
        for x in W.elements:
            for y in W.elements[: 1 + W.rank]:
                prod = self.engine.mul(self.weyl_lift(x), self.weyl_lift(y))
                diff = self.engine.mul(prod, self.engine.inv(self.weyl_lift(W.mul(x, y))))
                if diff.tolist() != np.diag(np.diag(diff)).tolist():
                    raise AssertionError("Weyl lifts do not project to W")

    def simple_lift(self, s):
        xs, xms = self._simple[s]
        F = self.field
        one, mone = 1, F.neg(1)
        e = self.engine
        return e.mul(e.mul(xs(one), xms(mone)), xs(one))

    def weyl_lift(self, w):
        """n_w: the product of the simple lifts along the ShortLex word of w."""
        m = self.engine.identity()
        for s in w.word:
            m = self.engine.mul(m, self.simple_lift(s))
        return m

    # ------------------------------------------------------------------
    # roots

    @cached_property
    def roots(self):
        return self.coxeter.roots()

    @cached_property
    def _root_transport(self):
        """root -> (w, s) with root = w . alpha_s, w ShortLex-minimal."""
        W = self.coxeter
        simple = W.simple_roots()
        out = {}
        for w in W.elements:
            for s, a in enumerate(simple):
                r = W.act_on_root(w, a)
                if r not in out:
                    out[r] = (w, s)
        if len(out) != len(self.roots):
            raise AssertionError("roots are not W-translates of simple roots")
        return out

    def root_element(self, alpha, t):
        """x_alpha(t) = n_w x_s(t) n_w^{-1}."""
        w, s = self._root_transport[alpha]
        nw = self.weyl_lift(w)
        e = self.engine
        return e.mul(e.mul(nw, self._simple[s][0](t)), e.inv(nw))

    def root_generators(self, alpha):
        return np.stack([self.root_element(alpha, t) for t in self.field.additive_basis])

    @cached_property
    def _root_groups(self):
        out = {}
        for a in self.roots:
            mats = np.stack([self.root_element(a, t) for t in range(self.q)])
            keys = self.engine.encode(mats)
            order = np.argsort(keys)
            out[a] = FinSubgroup(self.engine, keys[order], mats[order],
                                 self.root_generators(a), name=f"U[{a!r}]")
        return out

    def root_group(self, alpha):
        return self._root_groups[alpha]

    def subgroup_of_roots(self, roots, name=""):
        roots = list(roots)
        if not roots:
            return FinSubgroup.generated(self.engine, [], name=name)
        gens = np.concatenate([self.root_generators(a) for a in roots])
        return FinSubgroup.generated(self.engine, gens, name=name, cap=self.cap)

    # ------------------------------------------------------------------
    # the big groups

    @cached_property
    def torus_generators(self):
        F = self.field
        z = F.primitive
        zi = F.inv(z)
        gens = []
        if self.family == "GL":
            for i in range(self.n):
                d = np.eye(self.n, dtype=np.int64)
                d[i, i] = z
                gens.append(d)
        elif self.family == "SL":
            for i in range(self.n - 1):
                d = np.eye(self.n, dtype=np.int64)
                d[i, i], d[i + 1, i + 1] = z, zi
                gens.append(d)
        else:
            gens.append(np.diag([z, 1, 1, zi]))
            gens.append(np.diag([1, z, zi, 1]))
        return np.stack(gens)

    @cached_property
    def H(self):
        return FinSubgroup.generated(self.engine, self.torus_generators, name="H")

    @cached_property
    def N(self):
        gens = np.concatenate([self.torus_generators,
                               np.stack([self.simple_lift(s) for s in range(self.coxeter.rank)])])
        return FinSubgroup.generated(self.engine, gens, name="N", cap=self.cap)

    @cached_property
    def G_dagger(self):
        return self.subgroup_of_roots(self.roots, name="G_dagger")

    @cached_property
    def G(self):
        if self.family == "GL":
            gens = np.concatenate([np.concatenate([self.root_generators(a) for a in self.roots]),
                                   self.torus_generators])
            return FinSubgroup.generated(self.engine, gens, name="G", cap=self.cap)
        return self.G_dagger

    @cached_property
    def B(self):
        gens = np.concatenate([self.torus_generators, self.U(self.c0).generators()])
        return FinSubgroup.generated(self.engine, gens, name="B", cap=self.cap)

    # ------------------------------------------------------------------
    # simplices

    @cached_property
    def simplices(self):
        return self.coxeter.simplices()

    @cached_property
    def c0(self):
        return self.coxeter.chamber(self.coxeter.identity)

    @cached_property
    def _residue_masks(self):
        return {s: self.coxeter.residue_mask(s) for s in self.simplices}

    def roots_containing(self, s):
        rm = self._residue_masks[s]
        return [a for a in self.roots if rm & ~a.chambers == 0]

    @cached_property
    def _u_cache(self):
        return {}

    def U(self, s):
        """U_s = <U_alpha : R_s contained in alpha>."""
        if not s.cospherical:
            raise ValueError("U_s is defined for co-spherical simplices only")
        if s not in self._u_cache:
            self._u_cache[s] = self.subgroup_of_roots(self.roots_containing(s), name=f"U[{s!r}]")
        return self._u_cache[s]

    def u_s(self, s):
        return self.U(s)

    @cached_property
    def _p_cache(self):
        return {}

    def parabolic(self, s):
        """P_s = n_w <B, lifts of W_J> n_w^{-1} for s = w W_J."""
        if s not in self._p_cache:
            gens = [self.B.generators()]
            gens += [self.simple_lift(j)[None] for j in s.J]
            std = FinSubgroup.generated(self.engine, np.concatenate(gens), cap=self.cap)
            nw = self.weyl_lift(s.rep)
            e = self.engine
            conj = e.mul(e.mul(nw[None], std.mats), e.inv(nw)[None])
            keys = e.encode(conj)
            order = np.argsort(keys)
            gconj = e.mul(e.mul(nw[None], std.generators()), e.inv(nw)[None])
            self._p_cache[s] = FinSubgroup(e, keys[order], conj[order], gconj, name=f"P[{s!r}]")
        return self._p_cache[s]

    # ------------------------------------------------------------------
    # engine queries

    @cached_property
    def inverse_index(self):
        """Index in G of each element's inverse."""
        G = self.G
        inv = self.engine.power(G.mats, G.order - 1)
        return G.index_of(inv)

    def normalizer(self, U, within=None):
        """N_within(U) by brute force."""
        X = self.G if within is None else within
        e = self.engine
        inv = e.power(X.mats, X.order - 1)
        ok = np.ones(X.order, dtype=bool)
        for u in U.generators():
            conj = e.mul(e.mul(X.mats, u[None]), inv)
            ok &= U.contains_keys(e.encode(conj))
        return FinSubgroup(e, X.keys[ok], X.mats[ok], name=f"N({U.name})")

    def center(self, X):
        e = self.engine
        ok = np.ones(X.order, dtype=bool)
        for g in X.generators():
            ok &= np.all(e.mul(X.mats, g[None]) == e.mul(g[None], X.mats), axis=(1, 2))
        return FinSubgroup(e, X.keys[ok], X.mats[ok], name=f"Z({X.name})")

    def transversal(self, U, within=None):
        G = self.G if within is None else within
        part = left_cosets(G, U)
        return G.mats[part.reps]

    def index(self, U, within=None):
        G = self.G if within is None else within
        if not U <= G:
            raise ValueError("not a subgroup")
        return G.order // U.order

    def commutator_subgroup(self, A, B):
        """<[a, b] : a in A, b in B>."""
        e = self.engine
        ainv = e.power(A.mats, A.order - 1)
        binv = e.power(B.mats, B.order - 1)
        comms = e.mul(e.mul(A.mats[:, None], B.mats[None]),
                      e.mul(ainv[:, None], binv[None])).reshape(-1, self.n, self.n)
        keys = np.unique(e.encode(comms))
        return FinSubgroup.generated(e, e.decode(keys), cap=self.cap)

    def set_product_keys(self, A, B):
        e = self.engine
        prods = e.mul(A.mats[:, None], B.mats[None]).reshape(-1, self.n, self.n)
        return np.unique(e.encode(prods))


# ----------------------------------------------------------------------
# operations


def instantiate(family, n, q, cap=DEFAULT_GROUP_CAP):
    return RootDatumInstance(family, n, q, cap=cap)


def root_group(inst, alpha):
    return inst.root_group(alpha)


def weyl_lift(inst, w):
    return inst.weyl_lift(w)


def u_s(inst, s):
    return inst.U(s)


def parabolic(inst, s):
    return inst.parabolic(s)


def g_dagger_index(inst):
    return inst.G.order // inst.G_dagger.order


def interval_group(inst, roots, name=""):
    return inst.subgroup_of_roots(roots, name=name)


def prenilpotent_pairs(inst, non_nested=False):
    out = []
    for a in inst.roots:
        for b in inst.roots:
            cls = prenilpotent_classify(a, b)
            if cls.kind == "not-prenilpotent":
                continue
            if non_nested and cls.nested:
                continue
            out.append((a, b))
    return out


def product_decomposition_check(inst, a, b):
    """U_[a,b] == U_a * U_]a,b] as sets."""
    full = inst.subgroup_of_roots(root_interval(a, b).members)
    rest = inst.subgroup_of_roots(root_interval(a, b, "left-open").members)
    prod = inst.set_product_keys(inst.root_group(a), rest)
    return bool(np.array_equal(prod, full.keys))


@dataclass
class ShadowWitness:
    kind: str                 # "pair" or "root"
    roots: tuple
    intersection_order: int
    steps: list = field(default_factory=list)
    verified: bool = False


def _outside_count(inst, s, a, b):
    rm = inst._residue_masks[s]
    return bin(rm & ~(a.chambers & b.chambers)).count("1")


def stabiliser_interval_shadow(inst, s, a, b):
    """A witness (gamma, delta) or gamma for U_s ∩ U_[a,b] ⊆ U_[gamma,delta] / U_gamma.

    Follows the peeling argument: while R_s is not inside a ∩ b, drop the
    endpoint whose root group cannot meet U_s and shrink the interval,
    checking every inclusion extensionally.
    """
    cls = prenilpotent_classify(a, b)
    if cls.kind == "not-prenilpotent" or (cls.nested and a != b):
        raise ValueError("needs a prenilpotent, non-nested pair")
    rm = inst._residue_masks[s]
    if not rm & a.chambers & b.chambers:
        raise ValueError("simplex does not lie in a ∩ b")
    Us = inst.U(s)
    inter = Us.intersection_keys(inst.subgroup_of_roots(root_interval(a, b).members))
    steps = [(a, b, _outside_count(inst, s, a, b))]

    def covers(roots):
        grp = inst.subgroup_of_roots(roots)
        return bool(grp.contains_keys(inter).all())

    cur_a, cur_b = a, b
    while _outside_count(inst, s, cur_a, cur_b) > 0:
        from .coxeter import interval_peel
        if cur_a == cur_b:
            break
        peel = interval_peel(cur_a, cur_b)
        left = root_interval(cur_a, cur_b, "left-open").members
        right = root_interval(cur_a, cur_b, "right-open").members
        if peel.singleton:
            for g, members in ((cur_b, left), (cur_a, right)):
                if covers(members):
                    if rm & ~g.chambers == 0:
                        return ShadowWitness("root", (g,), len(inter), steps, True)
                    if len(inter) == 1:
                        any_root = inst.roots_containing(s)[0]
                        return ShadowWitness("root", (any_root,), 1, steps, True)
            break
        moved = False
        for na, nb, members in ((peel.alpha_prime, cur_b, left), (cur_a, peel.beta_prime, right)):
            if covers(members) and _outside_count(inst, s, na, nb) < _outside_count(inst, s, cur_a, cur_b):
                cur_a, cur_b = na, nb
                steps.append((na, nb, _outside_count(inst, s, na, nb)))
                moved = True
                break
        if not moved:
            break
    if _outside_count(inst, s, cur_a, cur_b) == 0:
        ok = covers(root_interval(cur_a, cur_b).members)
        if cur_a == cur_b:
            return ShadowWitness("root", (cur_a,), len(inter), steps, ok)
        return ShadowWitness("pair", (cur_a, cur_b), len(inter), steps, ok)
    # the constructive path stalled; fall back to exhaustive search
    for g, d in prenilpotent_pairs(inst, non_nested=True):
        if rm & ~(g.chambers & d.chambers) == 0 and covers(root_interval(g, d).members):
            return ShadowWitness("pair", (g, d), len(inter), steps, True)
    for g in inst.roots_containing(s):
        if covers([g]):
            return ShadowWitness("root", (g,), len(inter), steps, True)
    return ShadowWitness("none", (), len(inter), steps, False)


@dataclass
class SideConditionReport:
    co_star: bool
    culprit: str | None
    rank2_orders: dict            # (s, t) -> (|X|, |Z|, |X/Z|)
    commutator_condition: dict    # s -> bool

    @property
    def commutator_ok(self):
        return all(self.commutator_condition.values())


def side_conditions(inst):
    W = inst.coxeter
    simple = W.simple_roots()
    X = {}
    for s, a in enumerate(simple):
        X[s] = inst.subgroup_of_roots([a, -a], name=f"X_{s}")
    orders = {}
    culprit = None
    for s, t in combinations(range(W.rank), 2):
        Xst = inst.subgroup_of_roots([simple[s], -simple[s], simple[t], -simple[t]], name=f"X_{s}{t}")
        Z = inst.center(Xst)
        quo = Xst.order // Z.order
        orders[(s, t)] = (Xst.order, Z.order, quo)
        if quo in EXCLUDED_RANK2 and culprit is None:
            culprit = f"X_{{{s},{t}}}/Z of order {quo} ({EXCLUDED_RANK2[quo]})"
    comm = {}
    for s, a in enumerate(simple):
        Ua, Uma = inst.root_group(a), inst.root_group(-a)
        Ha_keys = np.intersect1d(inst.normalizer(Ua, X[s]).keys, inst.normalizer(Uma, X[s]).keys)
        Ha = FinSubgroup(inst.engine, Ha_keys, name=f"H_{s}")
        comm[s] = inst.commutator_subgroup(Ha, Ua) == Ua
    return SideConditionReport(culprit is None, culprit, orders, comm)
