"""Finite presentations, Todd-Coxeter enumeration and Tietze reduction.

Words are tuples of nonzero ints: ``i + 1`` stands for generator i and
``-(i + 1)`` for its inverse.
"""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field

import numpy as np

from .algebra import smith_normal_form

DEFAULT_TC_CAP = int(os.environ.get("WAGONER_TC_CAP", 1_000_000))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def invert(word):
    return tuple(-x for x in reversed(word))


def _canonical_cyclic(word):
    """Least rotation of the word or its inverse, for relator dedup."""
    best = None
    for w in (word, invert(word)):
        for i in range(len(w) or 1):
            r = w[i:] + w[:i]
            if best is None or r < best:
                best = r
    return best or ()


@dataclass
class Presentation:
    generators: list
    relators: list
    labels: dict = field(default_factory=dict)   # generator index -> group element

    def __post_init__(self):
        n = len(self.generators)
        rels = []
        for r in self.relators:
            r = free_reduce(r)
            if any(abs(x) > n or x == 0 for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")
            if r:
                rels.append(r)
        self.relators = rels

    @property
    def ngens(self):
        return len(self.generators)

    def word(self, *symbols):
        """Build a word from generator names, ``'a^-1'`` for inverses."""
        idx = {g: i for i, g in enumerate(self.generators)}
        out = []
        for s in symbols:
            inv = s.endswith("^-1")
            name = s[:-3] if inv else s
            out.append(-(idx[name] + 1) if inv else idx[name] + 1)
        return tuple(out)

    def to_text(self):
        """Plain-text form: a header line of generators, then one relator per
        line as space-separated symbols with ``^-1`` marking inverses."""
        lines = ["generators: " + " ".join(self.generators)]
        for r in self.relators:
            lines.append(" ".join(self.generators[abs(x) - 1] + ("^-1" if x < 0 else "") for x in r))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or not lines[0].startswith("generators:"):
            raise ValueError("first line must list generators")
        gens = lines[0].split(":", 1)[1].split()
        idx = {g: i for i, g in enumerate(gens)}
        rels = []
        for ln in lines[1:]:
            word = []
            for tok in ln.split():
                inv = tok.endswith("^-1")
                name = tok[:-3] if inv else tok
                if name not in idx:
                    raise ValueError(f"unknown generator {name!r}")
                word.append(-(idx[name] + 1) if inv else idx[name] + 1)
            rels.append(tuple(word))
        return cls(gens, rels)

    def abelian_invariants(self):
        """Invariant factors of the abelianisation (0 for each Z summand)."""
        if self.ngens == 0:
            return []
        m = np.zeros((max(len(self.relators), 1), self.ngens), dtype=object)
        for i, r in enumerate(self.relators):
            for x in r:
                m[i, abs(x) - 1] += 1 if x > 0 else -1
        snf = smith_normal_form(m.tolist())
        factors = [abs(int(d)) for d in snf.factors if abs(int(d)) != 1]
        return factors + [0] * (self.ngens - snf.rank)


# ----------------------------------------------------------------------
# Todd-Coxeter


class CosetOverflow(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"coset enumeration exceeded {cap} cosets")
        self.cap = cap


@dataclass
class CosetTable:
    """Completed (compressed) coset table or an overflow marker.

    ``table[c][2*i]`` is the image of coset c under generator i and
    ``table[c][2*i+1]`` under its inverse; coset 0 is the subgroup itself.
    """

    status: str                  # "complete" or "overflow"
    index: int | None
    table: list | None
    cap: int
    defined: int = 0             # total cosets defined during the run

    @property
    def complete(self):
        return self.status == "complete"

    def permutation(self, word):
        """Action of a word on cosets as an index array."""
        perm = np.arange(self.index)
        t = np.array(self.table, dtype=np.int64)
        for x in word:
            col = 2 * (abs(x) - 1) + (0 if x > 0 else 1)
            perm = t[perm, col]
        return perm

    def digest(self):
        import hashlib
        return hashlib.sha256(repr((self.status, self.index, self.table)).encode()).hexdigest()


class _Enumerator:
    def __init__(self, pres, subgroup, cap):
        self.ngens = pres.ngens
        self.ncols = 2 * self.ngens
        self.cap = cap
        self.rels = [self._cols(r) for r in pres.relators]
        self.sub = [self._cols(w) for w in subgroup]
        self.table = [[-1] * self.ncols]
        self.parent = [0]            # union-find; parent[c] == c while alive
        self.alive = 1
        self.defined = 1

    def _cols(self, word):
        return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in word]

    def find(self, c):
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, c, x):
        """New coset c·x; at the cap run a lookahead first and return None."""
        if self.alive >= self.cap:
            self.lookahead()
            if self.alive >= self.cap:
                raise CosetOverflow(self.cap)
            return None
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.alive += 1
        self.defined += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def coincidence(self, a, b):
        table, parent = self.table, self.parent
        queue = []

        def merge(u, v):
            u, v = self.find(u), self.find(v)
            if u == v:
                return
            if u > v:
                u, v = v, u
            parent[v] = u
            self.alive -= 1
            queue.append(v)

        merge(a, b)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for x in range(self.ncols):
                f = row[x]
                if f < 0:
                    continue
                xi = x ^ 1
                if table[f][xi] == e:
                    table[f][xi] = -1
                e1, f1 = self.find(e), self.find(f)
                t = table[e1][x]
                if t >= 0:
                    merge(f1, t)
                else:
                    t2 = table[f1][xi]
                    if t2 >= 0:
                        merge(e1, t2)
                    else:
                        table[e1][x] = f1
                        table[f1][xi] = e1

    def scan(self, c, word, fill):
        """Scan ``word`` from coset c; False means a lookahead interrupted it."""
        table = self.table
        f, i = c, 0
        b, j = c, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return True
            while j >= i and table[b][word[j] ^ 1] >= 0:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return True
            if not fill:
                return True
            if self.define(f, word[i]) is None:
                return False

    def lookahead(self):
        c = 0
        while c < len(self.table):
            if self.parent[c] == c:
                for r in self.rels:
                    self.scan(c, r, False)
                    if self.parent[c] != c:
                        break
            c += 1

    def run(self):
        parent, table = self.parent, self.table
        for w in self.sub:
            while not self.scan(0, w, True):
                pass
        c = 0
        while c < len(table):
            if parent[c] == c:
                for r in self.rels:
                    while parent[c] == c and not self.scan(c, r, True):
                        pass
                    if parent[c] != c:
                        break
                for x in range(self.ncols):
                    while parent[c] == c and table[c][x] < 0:
                        self.define(c, x)
            c += 1

    def compressed(self):
        # renumber in BFS order from coset 0 for a canonical table
        order, seen = [0], {0: 0}
        k = 0
        while k < len(order):
            c = order[k]
            for x in range(self.ncols):
                d = self.find(self.table[c][x])
                if d not in seen:
                    seen[d] = len(order)
                    order.append(d)
            k += 1
        return [[seen[self.find(self.table[c][x])] for x in range(self.ncols)] for c in order]


def todd_coxeter(pres, subgroup=(), cap=None):
    """Enumerate the cosets of the subgroup generated by the given words.

    Deterministic HLT enumeration with a lookahead pass whenever the live
    coset count reaches ``cap``; returns an overflow table if that fails.
    """
    cap = DEFAULT_TC_CAP if cap is None else cap
    if cap < 1:
        raise ValueError("cap must be positive")
    if pres.ngens == 0:
        return CosetTable("complete", 1, [[]], cap, 1)
    en = _Enumerator(pres, [free_reduce(w) for w in subgroup], cap)
    try:
        en.run()
    except CosetOverflow:
        return CosetTable("overflow", None, None, cap, en.defined)
    table = en.compressed()
    return CosetTable("complete", len(table), table, cap, en.defined)


def group_order(pres, cap=None):
    t = todd_coxeter(pres, (), cap)
    return t.index if t.complete else None


# ----------------------------------------------------------------------
# Tietze reduction


@dataclass
class TietzeResult:
    presentation: Presentation
    eliminated: int
    expressions: dict     # original generator -> word in the surviving generators


def tietze_reduce(pres, max_word=None):
    """Eliminate generators that occur exactly once in some relator.

    Relators are processed shortest first.  ``max_word`` bounds the length
    of a substituted word (``None`` for no bound).
    """
    n = pres.ngens
    rels = {}
    occ = [set() for _ in range(n)]
    heap = []
    seen = set()
    rid = 0

    def add(word):
        nonlocal rid
        word = cyclic_reduce(word)
        if not word:
            return
        key = _canonical_cyclic(word)
        if key in seen:
            return
        seen.add(key)
        rels[rid] = word
        for x in word:
            occ[abs(x) - 1].add(rid)
        heapq.heappush(heap, (len(word), rid))
        rid += 1

    def drop(r):
        word = rels.pop(r)
        seen.discard(_canonical_cyclic(word))
        for x in word:
            occ[abs(x) - 1].discard(r)
        return word

    for r in pres.relators:
        add(r)
    subst = {}       # eliminated generator -> word in remaining + eliminated ones
    alive = [True] * n
    while heap:
        length, r = heapq.heappop(heap)
        if r not in rels or len(rels[r]) != length:
            continue
        word = rels[r]
        counts = {}
        for x in word:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        single = [g for g, k in counts.items() if k == 1]
        if not single:
            continue
        if max_word is not None and length - 1 > max_word:
            continue
        # prefer the generator with the fewest other occurrences
        g = min(single, key=lambda g: (len(occ[g - 1]), g))
        pos = next(i for i, x in enumerate(word) if abs(x) == g)
        eps = 1 if word[pos] > 0 else -1
        rot = word[pos + 1:] + word[:pos]          # word = g^eps * rot (cyclically)
        value = invert(rot) if eps > 0 else rot    # g = value
        drop(r)
        alive[g - 1] = False
        subst[g - 1] = value
        for r2 in sorted(occ[g - 1]):
            w = drop(r2)
            new = []
            for x in w:
                if abs(x) == g:
                    new.extend(value if x > 0 else invert(value))
                else:
                    new.append(x)
            add(tuple(new))
    remaining = [i for i in range(n) if alive[i]]
    renum = {old: new for new, old in enumerate(remaining)}

    def rewrite(word):
        return tuple((renum[abs(x) - 1] + 1) * (1 if x > 0 else -1) for x in word)

    out_rels = [rewrite(rels[r]) for r in sorted(rels)]
    out = Presentation([pres.generators[i] for i in remaining], out_rels)
    # express every original generator in surviving generators
    memo = {}

    def expand(i):
        if i in memo:
            return memo[i]
        if alive[i]:
            memo[i] = (renum[i] + 1,)
            return memo[i]
        stack = [(i, False)]
        while stack:
            j, done = stack.pop()
            if j in memo:
                continue
            deps = [abs(x) - 1 for x in subst[j] if not alive[abs(x) - 1] and abs(x) - 1 not in memo]
            if done or not deps:
                res = []
                for x in subst[j]:
                    k = abs(x) - 1
                    part = (renum[k] + 1,) if alive[k] else memo[k]
                    res.extend(part if x > 0 else invert(part))
                memo[j] = free_reduce(res)
            else:
                stack.append((j, True))
                stack.extend((d, False) for d in deps)
        return memo[i]

    exprs = {i: expand(i) for i in range(n)} if n <= 5000 else {}
    return TietzeResult(out, n - len(remaining), exprs)


# ----------------------------------------------------------------------
# Reidemeister-Schreier


def reidemeister_schreier(pres, table):
    """Presentation of the subgroup whose complete coset table is given.

    Schreier generators are the non-tree entries (c, x) of the table for
    the BFS spanning tree from coset 0; relators are the relators of
    ``pres`` traced from every coset.
    """
    if not table.complete:
        raise ValueError("needs a complete coset table")
    t = table.table
    index = table.index
    ngens = pres.ngens
    tree = set()
    seen = {0}
    queue = [0]
    k = 0
    while k < len(queue):
        c = queue[k]
        k += 1
        for x in range(2 * ngens):
            d = t[c][x]
            if d not in seen:
                seen.add(d)
                queue.append(d)
                tree.add((c, x))
                tree.add((d, x ^ 1))
    gens = {}
    names = []
    for c in range(index):
        for i in range(ngens):
            if (c, 2 * i) not in tree:
                gens[(c, i)] = len(names)
                names.append(f"s{c}_{pres.generators[i]}")

    def letter(c, x):
        i, inv = x // 2, x & 1
        if inv:
            d = t[c][x]
            key = (d, i)
            return -(gens[key] + 1) if key in gens else None
        key = (c, i)
        return gens[key] + 1 if key in gens else None

    rels = []
    for c in range(index):
        for r in pres.relators:
            cur, word = c, []
            for x in r:
                col = 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1
                l = letter(cur, col)
                if l is not None:
                    word.append(l)
                cur = t[cur][col]
            rels.append(tuple(word))
    return Presentation(names, rels)


def cayley_presentation_table(perms):
    """Coset table of the trivial subgroup from generator permutations.

    ``perms[i]`` is the right action of generator i on a regular set whose
    point 0 is the identity.
    """
    perms = [np.asarray(p) for p in perms]
    n = len(perms[0])
    table = []
    invs = [np.argsort(p) for p in perms]
    for c in range(n):
        row = []
        for p, q in zip(perms, invs):
            row.extend([int(p[c]), int(q[c])])
        table.append(row)
    return CosetTable("complete", n, table, n, n)
