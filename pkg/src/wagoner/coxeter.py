"""Coxeter systems, their complexes, roots and root intervals.

Group elements carry an exact matrix in the Tits reflection representation
(entries in Z[sqrt2, sqrt3]) together with their ShortLex-minimal word.
Chambers of the Coxeter complex are identified with group elements; a
simplex is a coset ``w W_J`` with ``J`` a proper subset of the generators,
stored through its minimal-length representative.  Roots are half-spaces
of chambers, ``{w : l(t w) > l(w)}`` and its complement for a reflection t.

For finite groups every chamber set is an ``int`` bitmask over the
ShortLex-ordered element list.  Infinite groups are only ever inspected
inside a word-length ball.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .algebra import QuadInt

INF = 0  # Coxeter matrix marker for m(s, t) = infinity

_TWO_B = {
    1: QuadInt(2),
    2: QuadInt(0),
    3: QuadInt(-1),
    4: QuadInt(0, -1),
    6: QuadInt(0, 0, -1),
    INF: QuadInt(-2),
}


class CoxeterError(ValueError):
    """Invalid Coxeter data or an unsupported query."""


class BallCapExceeded(RuntimeError):
    """A word-length enumeration grew past the configured cap."""

    def __init__(self, cap, what="ball"):
        super().__init__(f"{what} exceeded cap of {cap} elements")
        self.cap = cap


class UndecidableInBall(RuntimeError):
    """The certifying ball does not separate the cases of a pair of roots."""


def _normalise_entry(x):
    if x is None or x == math.inf or x == INF or (isinstance(x, int) and x < 0):
        return INF
    if isinstance(x, str) and x.strip().lower() in ("inf", "oo", "∞"):
        return INF
    return int(x)


def _qmat_mul(a, b):
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = QuadInt(0)
            for x, y in zip(row, col):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def _qmat_vec(a, v):
    out = []
    for row in a:
        acc = QuadInt(0)
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def _vec_sign(v):
    for x in v:
        s = x.sign()
        if s:
            return s
    return 0


@dataclass(frozen=True, eq=False)
class WElement:
    """An element of W: ShortLex word plus reflection-representation matrix."""

    word: tuple
    matrix: tuple = field(repr=False)

    @property
    def length(self):
        return len(self.word)

    def __eq__(self, other):
        return isinstance(other, WElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def shortlex_key(self):
        return (len(self.word), self.word)

    def __lt__(self, other):
        return self.shortlex_key() < other.shortlex_key()

    def __repr__(self):
        return "W(" + ("".join(f"s{i}" for i in self.word) or "e") + ")"


@dataclass(frozen=True, eq=False)
class CoxSimplex:
    """The simplex ``rep * W_J``; chambers have ``J = ()``."""

    J: tuple
    rep: WElement
    cospherical: bool

    @property
    def codim(self):
        return len(self.J)

    def __eq__(self, other):
        return isinstance(other, CoxSimplex) and self.J == other.J and self.rep == other.rep

    def __hash__(self):
        return hash((self.J, self.rep))

    def sort_key(self):
        return (len(self.J), self.J, self.rep.shortlex_key())

    def __repr__(self):
        return f"Simplex(J={self.J}, rep={self.rep!r})"


@dataclass(frozen=True, eq=False)
class Root:
    """Half-space of chambers cut out by the wall of ``reflection``.

    ``sign=+1`` is the side containing the identity chamber.  ``vector`` is
    the (sign-adjusted) root vector in the reflection representation.
    """

    reflection: WElement
    sign: int
    vector: tuple = field(repr=False)
    chambers: int | None = field(default=None, repr=False)
    system: "CoxeterSystem" = field(default=None, repr=False, compare=False)

    def __eq__(self, other):
        return (isinstance(other, Root) and self.reflection == other.reflection
                and self.sign == other.sign)

    def __hash__(self):
        return hash((self.reflection, self.sign))

    def __neg__(self):
        return self.system.root(self.reflection, -self.sign)

    def contains(self, w):
        """Chamber membership: ``w`` lies in the root iff l(t w) > l(w) flips with the sign."""
        sysm = self.system
        if self.chambers is not None and sysm.spherical:
            return bool(self.chambers >> sysm.index[w] & 1)
        up = sysm.length(sysm.mul(self.reflection, w)) > w.length
        return up if self.sign > 0 else not up

    def sort_key(self):
        return (self.reflection.shortlex_key(), -self.sign)

    def __repr__(self):
        return ("+" if self.sign > 0 else "-") + "root" + repr(self.reflection)[1:]


@dataclass(frozen=True)
class PairClass:
    kind: str              # not-prenilpotent | prenilpotent-nested | prenilpotent-finite-order
    order: int | None      # order of s_a s_b, None for infinite
    nested: bool
    containment: str | None = None   # "a<=b", "b<=a", "equal" or None


@dataclass
class RootInterval:
    endpoints: tuple
    variant: str
    members: list

    def __contains__(self, root):
        return root in self.members

    def __len__(self):
        return len(self.members)

    def as_set(self):
        return frozenset(self.members)


class CoxeterSystem:
    """A Coxeter system given by its Coxeter matrix.

    ``validate=False`` skips the rank and isolated-node checks; it is used
    for rank-2 links and the commuting polygon (m = 2), which occur as
    residues inside valid systems.
    """

    def __init__(self, matrix, *, validate=True, cap=100_000):
        m = [[_normalise_entry(x) for x in row] for row in matrix]
        n = len(m)
        if any(len(row) != n for row in m):
            raise CoxeterError("Coxeter matrix must be square")
        for i in range(n):
            if m[i][i] != 1:
                raise CoxeterError("diagonal entries must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise CoxeterError("Coxeter matrix must be symmetric")
                if i != j and m[i][j] not in (2, 3, 4, 6, INF):
                    raise CoxeterError(f"unsupported Coxeter label {m[i][j]}")
        if validate:
            if n < 2:
                raise CoxeterError("rank must be at least 2")
            for i in range(n):
                if all(m[i][j] == 2 for j in range(n) if j != i):
                    raise CoxeterError(f"generator {i} is an isolated node")
        self.m = tuple(tuple(r) for r in m)
        self.rank = n
        self.cap = cap
        self.two_b = tuple(tuple(_TWO_B[m[i][j]] for j in range(n)) for i in range(n))
        one, zero = QuadInt(1), QuadInt(0)
        gens = []
        for s in range(n):
            rows = []
            for i in range(n):
                if i == s:
                    rows.append(tuple((one if j == s else zero) - self.two_b[s][j] for j in range(n)))
                else:
                    rows.append(tuple(one if j == i else zero for j in range(n)))
            gens.append(tuple(rows))
        self.gen_matrices = tuple(gens)
        ident = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        self.identity = WElement((), ident)
        self._cache = {ident: self.identity}
        self._balls = {}
        self._root_lookup = {}
        self.spherical = self._finite_subgroup(tuple(range(n)), cap)

    def __repr__(self):
        return f"CoxeterSystem({[list(r) for r in self.m]})"

    # ------------------------------------------------------------------
    # elements

    def _right_descent(self, mat, s):
        return _vec_sign(tuple(row[s] for row in mat)) < 0

    def _reduced_word(self, mat):
        """Some reduced word for ``mat`` via right descents."""
        word = []
        cur = mat
        while True:
            for s in range(self.rank):
                if self._right_descent(cur, s):
                    cur = _qmat_mul(cur, self.gen_matrices[s])
                    word.append(s)
                    break
            else:
                break
            if len(word) > 10_000:
                raise CoxeterError("length computation did not terminate")
        return tuple(reversed(word))

    def from_matrix(self, mat):
        hit = self._cache.get(mat)
        if hit is not None:
            return hit
        word = self._reduced_word(mat)
        inv = self.identity.matrix
        for s in word:  # inverse of s_{i1}...s_{ik} is s_{ik}...s_{i1}
            inv = _qmat_mul(self.gen_matrices[s], inv)
        # greedy ShortLex: smallest left descent first
        y, yinv = mat, inv
        shortlex = []
        for _ in range(len(word)):
            for s in range(self.rank):
                if self._right_descent(yinv, s):
                    y = _qmat_mul(self.gen_matrices[s], y)
                    yinv = _qmat_mul(yinv, self.gen_matrices[s])
                    shortlex.append(s)
                    break
        el = WElement(tuple(shortlex), mat)
        self._cache[mat] = el
        return el

    def element(self, word):
        mat = self.identity.matrix
        for s in word:
            if not 0 <= s < self.rank:
                raise CoxeterError(f"generator index {s} out of range")
            mat = _qmat_mul(mat, self.gen_matrices[s])
        return self.from_matrix(mat)

    def generator(self, s):
        return self.element((s,))

    def mul(self, x, y):
        return self.from_matrix(_qmat_mul(x.matrix, y.matrix))

    def inverse(self, x):
        return self.element(tuple(reversed(x.word)))

    def length(self, x):
        return len(x.word)

    def act(self, x, vec):
        return _qmat_vec(x.matrix, vec)

    def simple_root(self, s):
        return tuple(QuadInt(int(i == s)) for i in range(self.rank))

    def form(self, u, v):
        """Twice the invariant bilinear form."""
        acc = QuadInt(0)
        for i in range(self.rank):
            for j in range(self.rank):
                if not u[i].is_zero() and not v[j].is_zero():
                    acc = acc + u[i] * self.two_b[i][j] * v[j]
        return acc

    # ------------------------------------------------------------------
    # enumeration

    def _finite_subgroup(self, J, cap):
        """True when the standard parabolic W_J is finite (BFS with cap)."""
        seen = {self.identity.matrix}
        frontier = [self.identity.matrix]
        while frontier:
            nxt = []
            for mat in frontier:
                for s in J:
                    new = _qmat_mul(mat, self.gen_matrices[s])
                    if new not in seen:
                        seen.add(new)
                        nxt.append(new)
                        if len(seen) > cap:
                            return False
            frontier = nxt
        return True

    def ball(self, radius, cap=None):
        """All elements of length <= radius in ShortLex order."""
        cap = self.cap if cap is None else cap
        if radius < 0:
            raise CoxeterError("radius must be >= 0")
        best = max((r for r in self._balls if r >= radius), default=None)
        if best is not None:
            return [w for w in self._balls[best] if w.length <= radius]
        layers = [[self.identity]]
        seen = {self.identity.matrix}
        total = 1
        for _ in range(radius):
            nxt = []
            for w in layers[-1]:
                for s in range(self.rank):
                    mat = _qmat_mul(w.matrix, self.gen_matrices[s])
                    if mat in seen:
                        continue
                    seen.add(mat)
                    el = self._cache.get(mat)
                    if el is None:
                        el = WElement(w.word + (s,), mat)
                        self._cache[mat] = el
                    nxt.append(el)
                    total += 1
                    if total > cap:
                        raise BallCapExceeded(cap)
            if not nxt:
                break
            layers.append(nxt)
        out = [w for layer in layers for w in layer]
        self._balls[radius] = out
        return out

    @cached_property
    def elements(self):
        """All of W (finite systems only), ShortLex sorted."""
        if not self.spherical:
            raise CoxeterError("W is infinite")
        return self.ball(10 ** 6, cap=self.cap)

    @cached_property
    def order(self):
        return len(self.elements)

    @cached_property
    def index(self):
        return {w: i for i, w in enumerate(self.elements)}

    @cached_property
    def longest_element(self):
        return self.elements[-1]

    @cached_property
    def full_mask(self):
        return (1 << self.order) - 1

    def mask(self, chambers):
        idx = self.index
        out = 0
        for w in chambers:
            out |= 1 << idx[w]
        return out

    def unmask(self, bits):
        els = self.elements
        return [els[i] for i in range(self.order) if bits >> i & 1]

    # ------------------------------------------------------------------
    # simplices

    def parabolic_is_finite(self, J):
        return self._finite_subgroup(tuple(J), self.cap)

    def min_coset_rep(self, w, J):
        mat = w.matrix
        changed = True
        while changed:
            changed = False
            for j in J:
                if self._right_descent(mat, j):
                    mat = _qmat_mul(mat, self.gen_matrices[j])
                    changed = True
        return self.from_matrix(mat)

    def simplex(self, w, J):
        J = tuple(sorted(J))
        if len(J) >= self.rank:
            raise CoxeterError("J must be a proper subset of S")
        return CoxSimplex(J, self.min_coset_rep(w, J), self._cospherical(J))

    def _cospherical(self, J):
        cache = self.__dict__.setdefault("_cosph", {})
        if J not in cache:
            cache[J] = self.parabolic_is_finite(J)
        return cache[J]

    def chamber(self, w):
        return CoxSimplex((), w, True)

    def simplices(self, radius=None):
        """Cosets w W_J, J a proper subset of S (the empty face is excluded)."""
        chambers = self.elements if radius is None else self.ball(radius)
        out = set()
        for size in range(self.rank):
            for J in combinations(range(self.rank), size):
                for w in chambers:
                    out.add(self.simplex(w, J))
        return sorted(out, key=CoxSimplex.sort_key)

    def parabolic_elements(self, J):
        J = tuple(J)
        cache = self.__dict__.setdefault("_parabolics", {})
        if J in cache:
            return cache[J]
        if not self._cospherical(J):
            raise CoxeterError(f"W_{J} is infinite")
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for j in J:
                    x = self.mul(w, self.generator(j))
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
            frontier = nxt
        cache[J] = sorted(seen)
        return cache[J]

    def residue(self, s):
        """Chambers containing simplex ``s`` (the coset rep * W_J)."""
        cache = self.__dict__.setdefault("_residues", {})
        if s not in cache:
            cache[s] = sorted(self.mul(s.rep, x) for x in self.parabolic_elements(s.J))
        return list(cache[s])

    def residue_mask(self, s):
        return self.mask(self.residue(s))

    def is_face(self, s, t):
        """``s <= t``: s is a face of t, i.e. R_s contains R_t."""
        if not set(t.J) <= set(s.J):
            return False
        return self.min_coset_rep(t.rep, s.J) == s.rep

    def faces_of_chamber(self, c):
        out = []
        for size in range(self.rank):
            for J in combinations(range(self.rank), size):
                out.append(self.simplex(c, J))
        return out

    # ------------------------------------------------------------------
    # roots

    def _make_root(self, t, sign, vector, universe):
        bits = None
        if universe is not None:
            bits = 0
            for i, w in enumerate(universe):
                up = self.length(self.mul(t, w)) > w.length
                if up == (sign > 0):
                    bits |= 1 << i
        r = Root(t, sign, vector, bits, self)
        key = (t, sign)
        old = self._root_lookup.get(key)
        if old is None or (old.chambers is None and bits is not None):
            self._root_lookup[key] = r
        return self._root_lookup[key]

    def reflections(self, radius=None):
        """Reflections w s w^-1 with their positive root vectors."""
        pool = self.elements if radius is None else self.ball(radius)
        refl = {}
        for w in pool:
            for s in range(self.rank):
                t = self.mul(self.mul(w, self.generator(s)), self.inverse(w))
                if t in refl:
                    continue
                vec = self.act(w, self.simple_root(s))
                if _vec_sign(vec) < 0:
                    vec = tuple(-x for x in vec)
                refl[t] = vec
        return dict(sorted(refl.items(), key=lambda kv: kv[0].shortlex_key()))

    def roots(self, radius=None):
        """Roots (+ then - for each reflection, reflections in ShortLex order).

        Finite systems carry exact chamber bitmasks; for infinite systems
        the bitmask is taken over ``ball(radius)``.
        """
        key = ("roots", radius)
        cache = self.__dict__.setdefault("_root_cache", {})
        if key in cache:
            return cache[key]
        universe = self.elements if (radius is None or self.spherical) else self.ball(radius)
        out = []
        for t, vec in self.reflections(radius).items():
            out.append(self._make_root(t, 1, vec, universe))
            out.append(self._make_root(t, -1, tuple(-x for x in vec), universe))
        cache[key] = out
        return out

    def root(self, t, sign=1):
        hit = self._root_lookup.get((t, sign))
        if hit is not None:
            return hit
        if self.spherical:
            self.roots()
        else:
            vec = self.reflections(t.length).get(t)
            if vec is not None:
                self._make_root(t, 1, vec, None)
                self._make_root(t, -1, tuple(-x for x in vec), None)
        hit = self._root_lookup.get((t, sign))
        if hit is None:
            raise CoxeterError(f"{t} is not a reflection")
        return hit

    def simple_roots(self):
        return [self.root(self.generator(s), 1) for s in range(self.rank)]

    def root_from_mask(self, bits):
        for r in self.roots():
            if r.chambers == bits:
                return r
        return None

    def wall_contains(self, root, s):
        """True when simplex ``s`` lies in the wall of ``root``."""
        res = self.residue(s)
        inside = [root.contains(c) for c in res]
        return any(inside) and not all(inside)

    def act_on_root(self, w, root):
        """The root w.alpha; its vector is w applied to alpha's vector."""
        t = self.mul(self.mul(w, root.reflection), self.inverse(w))
        sign = 1 if _vec_sign(self.act(w, root.vector)) > 0 else -1
        return self.root(t, sign)


# ----------------------------------------------------------------------
# operations


def build_coxeter_system(matrix, **kwargs):
    return CoxeterSystem(matrix, **kwargs)


def enumerate_ball(system, radius, cap=None):
    return system.ball(radius, cap=cap)


def complex_simplices(system, radius=None):
    return system.simplices(radius)


def membership(root, w):
    return root.contains(w)


def roots_and_membership(system, radius=None):
    return system.roots(radius)


def _reflection_order(system, a, b):
    c = system.form(a.vector, b.vector)
    # |2B(a, b)| >= 2 means s_a s_b has infinite order
    if (c - 2).sign() >= 0 or (c + 2).sign() <= 0:
        if a.reflection == b.reflection:
            return 1
        return None
    prod = system.mul(a.reflection, b.reflection)
    x = prod
    for k in range(1, 13):
        if x == system.identity:
            return k
        x = system.mul(x, prod)
    raise CoxeterError("finite reflection product of unexpected order")


def prenilpotent_classify(a, b):
    """Classify a pair of roots as non-prenilpotent, nested or finite-order."""
    system = a.system
    if a.reflection == b.reflection:
        if a.sign == b.sign:
            return PairClass("prenilpotent-finite-order", 1, True, "equal")
        return PairClass("not-prenilpotent", 1, False)
    order = _reflection_order(system, a, b)
    if system.spherical:
        ab = a.chambers & b.chambers
        nab = (system.full_mask & ~a.chambers) & (system.full_mask & ~b.chambers)
        if not ab or not nab:
            return PairClass("not-prenilpotent", order, False)
        return PairClass("prenilpotent-finite-order", order, False)
    if order is not None:
        # distinct walls meeting in a spherical residue: both intersections
        # always contain chambers of the link polygon
        return PairClass("prenilpotent-finite-order", order, False)
    radius = 2 * (a.reflection.length + b.reflection.length) + system.rank
    ball = system.ball(radius)
    regions = {"ab": False, "a-b": False, "-ab": False, "-a-b": False}
    for w in ball:
        ia, ib = a.contains(w), b.contains(w)
        regions[("" if ia else "-") + "a" + ("" if ib else "-") + "b"] = True
    empty = [k for k, v in regions.items() if not v]
    if len(empty) != 1:
        raise UndecidableInBall(f"regions {empty} empty inside ball of radius {radius}")
    e = empty[0]
    if e == "a-b":
        return PairClass("prenilpotent-nested", None, True, "a<=b")
    if e == "-ab":
        return PairClass("prenilpotent-nested", None, True, "b<=a")
    return PairClass("not-prenilpotent", None, False)


def _interval_members_spherical(system, a, b, simplified):
    full = system.full_mask
    ab = a.chambers & b.chambers
    nab = (full & ~a.chambers) & (full & ~b.chambers)
    out = []
    for g in system.roots():
        if ab & ~g.chambers:
            continue
        if not simplified and nab & g.chambers:
            continue
        out.append(g)
    return out


def _apply_variant(a, b, members, variant):
    if variant == "closed":
        return members
    if variant == "left-open":
        return [g for g in members if g != a]
    if variant == "right-open":
        return [g for g in members if g != b]
    if variant == "open":
        return [g for g in members if g != a and g != b]
    raise CoxeterError(f"unknown interval variant {variant!r}")


def root_interval(a, b, variant="closed", method="auto"):
    """[a, b], ]a, b] or [a, b[ for a prenilpotent pair.

    ``method='definition'`` uses both containment conditions; the default
    for finite systems uses the simplified single-condition form, and for
    infinite systems goes through the rank-2 link of the wall intersection.
    """
    system = a.system
    cls = prenilpotent_classify(a, b)
    if cls.kind == "not-prenilpotent":
        raise CoxeterError("pair is not prenilpotent")
    if system.spherical:
        members = _interval_members_spherical(system, a, b, simplified=(method != "definition"))
    else:
        if cls.nested and cls.containment != "equal":
            raise CoxeterError("intervals of nested pairs in infinite systems are not supported")
        if a == b:
            members = [a]
        else:
            members = list(link_bijection(a, b).source)
    members = sorted(members, key=Root.sort_key)
    return RootInterval((a, b), variant, _apply_variant(a, b, members, variant))


@dataclass
class PeelResult:
    singleton: bool
    alpha_prime: Root | None
    beta_prime: Root | None


def interval_peel(a, b):
    """Either roots a', b' with ]a,b] = [a',b] and [a,b[ = [a,b'], or the
    certificate ]a,b] = {b}, [a,b[ = {a}."""
    cls = prenilpotent_classify(a, b)
    if cls.kind == "not-prenilpotent" or (cls.nested and cls.containment != "equal") or a == b:
        raise CoxeterError("interval_peel needs a prenilpotent, non-nested pair")
    left_open = root_interval(a, b, "left-open").as_set()
    right_open = root_interval(a, b, "right-open").as_set()
    if left_open == {b} and right_open == {a}:
        return PeelResult(True, None, None)
    ap = bp = None
    for g in sorted(left_open, key=Root.sort_key):
        if prenilpotent_classify(g, b).kind != "not-prenilpotent" and \
                root_interval(g, b).as_set() == left_open:
            ap = g
            break
    for g in sorted(right_open, key=Root.sort_key):
        if prenilpotent_classify(a, g).kind != "not-prenilpotent" and \
                root_interval(a, g).as_set() == right_open:
            bp = g
            break
    if ap is None or bp is None:
        raise CoxeterError("no peeling roots found")  # would contradict the lemma
    return PeelResult(False, ap, bp)


def reconstruct_interval(a, b):
    """Rebuild [a, b] by repeated peeling; returns (members, steps)."""
    members = [a]
    steps = 0
    cur = a
    while True:
        steps += 1
        if cur == b:
            return members, steps
        res = interval_peel(cur, b)
        if res.singleton:
            members.append(b)
            return members, steps
        cur = res.alpha_prime
        members.append(cur)


# ----------------------------------------------------------------------
# links


@dataclass
class LinkBijection:
    simplex: CoxSimplex    # None for the empty face of a rank-2 system
    link: CoxeterSystem
    alpha_bar: Root
    beta_bar: Root
    mapping: dict          # root of the ambient interval -> root of the link
    source: list           # ambient interval [a, b]
    target: list           # link interval [a_bar, b_bar]
    injective: bool
    surjective: bool

    @property
    def bijective(self):
        return self.injective and self.surjective


def wall_intersection_simplex(a, b):
    """ShortLex-first codimension-2 simplex lying in both walls."""
    system = a.system
    radius = None
    if not system.spherical:
        radius = 2 * (a.reflection.length + b.reflection.length) + system.rank
    chambers = system.elements if radius is None else system.ball(radius)
    best = None
    for J in combinations(range(system.rank), 2):
        if not system._cospherical(J):
            continue
        for c in chambers:
            s = system.simplex(c, J)
            if system.wall_contains(a, s) and system.wall_contains(b, s):
                if best is None or s.sort_key() < best.sort_key():
                    best = s
        if best is not None:
            return best
    raise UndecidableInBall("no codimension-2 simplex found in both walls")


def _link_system(system, J):
    m = system.m[J[0]][J[1]]
    return CoxeterSystem([[1, m], [m, 1]], validate=False)


def _to_link(system, link, s, w):
    """Chamber w of R_s as an element of the link's Coxeter group."""
    x = system.mul(system.inverse(s.rep), w)
    relabel = {s.J[0]: 0, s.J[1]: 1}
    return link.element(tuple(relabel[i] for i in x.word))


def link_bijection(a, b, s=None):
    """The map gamma -> gamma ∩ lk(s) from [a, b] onto [a_bar, b_bar]."""
    system = a.system
    if _reflection_order(system, a, b) is None:
        raise CoxeterError("s_a s_b has infinite order")
    if s is None and system.rank == 2:
        # the walls meet in the empty face, whose link is all of the system
        source = root_interval(a, b, method="definition").members
        mapping = {g: g for g in source}
        return LinkBijection(None, system, a, b, mapping, source, list(source), True, True)
    if s is None:
        s = wall_intersection_simplex(a, b)
    if len(s.J) != 2 or not (system.wall_contains(a, s) and system.wall_contains(b, s)):
        raise CoxeterError("simplex is not a codimension-2 face of both walls")
    link = _link_system(system, s.J)
    res = system.residue(s)
    to_link = {w: _to_link(system, link, s, w) for w in res}

    def restrict(g):
        bits = link.mask(to_link[w] for w in res if g.contains(w))
        return link.root_from_mask(bits)

    abar, bbar = restrict(a), restrict(b)
    target = root_interval(abar, bbar, method="definition").members

    if system.spherical:
        source = root_interval(a, b, method="definition").members
    else:
        # lift each link root to the ambient root with the conjugate wall
        source = []
        for gbar in target:
            tbar = gbar.reflection
            relabel = {0: s.J[0], 1: s.J[1]}
            t_local = system.element(tuple(relabel[i] for i in tbar.word))
            t = system.mul(system.mul(s.rep, t_local), system.inverse(s.rep))
            w0 = res[0]
            want = gbar.contains(to_link[w0])
            for sign in (1, -1):
                cand = system._root_lookup.get((t, sign))
                if cand is None:
                    vec = None
                    for tt, v in system.reflections(t.length).items():
                        if tt == t:
                            vec = v
                    cand = system._make_root(t, sign, vec if sign > 0 else tuple(-x for x in vec), None)
                if cand.contains(w0) == want:
                    source.append(cand)
                    break
    mapping = {}
    for g in source:
        mapping[g] = restrict(g)
    images = [mapping[g] for g in source]
    injective = None not in images and len(set(images)) == len(images)
    surjective = set(images) == set(target)
    return LinkBijection(s, link, abar, bbar, mapping, source, target, injective, surjective)


# ----------------------------------------------------------------------
# rank-2 polygons


def polygon_labelling(system):
    """Vertices x_0..x_{2m-1} in cyclic order and roots alpha_i containing
    x_i, ..., x_{i+m} (rank-2 finite systems)."""
    if system.rank != 2 or not system.spherical:
        raise CoxeterError("polygon labelling needs a finite rank-2 system")
    m = system.m[0][1]
    verts = [s for s in system.simplices() if len(s.J) == 1]

    def verts_of(c):
        return [system.simplex(c, (0,)), system.simplex(c, (1,))]

    order = [verts_of(system.identity)[0]]
    prev_ch = None
    cur_ch = system.identity
    while len(order) < 2 * m:
        v = order[-1]
        nxt = [x for x in verts_of(cur_ch) if x != v][0]
        order.append(nxt)
        # step to the other chamber through nxt
        prev_ch = cur_ch
        cur_ch = [c for c in system.residue(nxt) if c != prev_ch][0]
    assert len(set(order)) == 2 * m and len(verts) == 2 * m

    def root_vertices(r):
        vs = set()
        for c in system.unmask(r.chambers):
            vs.update(verts_of(c))
        return vs

    roots = []
    for i in range(2 * m):
        want = {order[(i + k) % (2 * m)] for k in range(m + 1)}
        hit = [r for r in system.roots() if root_vertices(r) == want]
        assert len(hit) == 1
        roots.append(hit[0])
    return order, roots
