"""Exact scalar and matrix arithmetic.

Three small structures live here:

* :class:`FiniteField` / :class:`FieldElement` -- the fields F_{p^k} used by
  the matrix groups, with lookup tables that also drive vectorised numpy
  matrix products.
* :class:`QuadInt` -- the ring Z[sqrt2, sqrt3], which is exactly what the
  Tits reflection representation needs for Coxeter labels 2, 3, 4, 6 and
  infinity.
* :func:`smith_normal_form` -- integer normal forms with Python ints.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class NotInvertibleError(ArithmeticError):
    """Division by a zero divisor or a non-unit, or inversion of a singular matrix."""


class MixedStructureError(TypeError):
    """Operands come from different algebraic structures."""


def _is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, lowest degree first)

def _poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(f, g, p):
    f = _poly_trim(f)
    g = _poly_trim(g)
    inv_lead = pow(g[-1], p - 2, p)
    while len(f) >= len(g):
        c = (f[-1] * inv_lead) % p
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        f = _poly_trim(f)
    return f


def is_irreducible(coeffs, p):
    """Exhaustive irreducibility test over F_p (fine for degree <= 4)."""
    f = _poly_trim([c % p for c in coeffs])
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not _poly_mod(f, g, p):
                return False
    return True


def _default_modulus(p, k):
    if k == 1:
        return [0, 1]
    for tail in itertools.product(range(p), repeat=k):
        f = list(reversed(tail)) + [1]
        if f[0] != 0 and is_irreducible(f, p):
            return f
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class FiniteField:
    """The field F_q, q = p**k, with elements encoded as integers 0..q-1.

    The integer ``v`` stands for the polynomial sum(c_i x^i) with
    ``v = sum(c_i p^i)``, so the constant coefficient is the least
    significant digit.  This encoding fixes a total order on the field.
    """

    def __init__(self, p, k=1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("degree must be >= 1")
        if modulus is None:
            modulus = _default_modulus(p, k)
        modulus = [c % p for c in modulus]
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if k > 1 and not is_irreducible(modulus, p):
            raise ValueError(f"{modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)
        self._build_tables()

    def _digits(self, v):
        out = []
        for _ in range(self.k):
            out.append(v % self.p)
            v //= self.p
        return out

    def _encode(self, digits):
        return sum(c * self.p ** i for i, c in enumerate(digits))

    def _build_tables(self):
        p, q = self.p, self.q
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        digits = [self._digits(v) for v in range(q)]
        for a in range(q):
            for b in range(q):
                add[a, b] = self._encode([(x + y) % p for x, y in zip(digits[a], digits[b])])
                prod = [0] * (2 * self.k - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] = (prod[i + j] + x * y) % p
                red = _poly_mod(prod, self.modulus, p) if self.k > 1 else [prod[0] % p]
                red = red + [0] * (self.k - len(red))
                mul[a, b] = self._encode(red)
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.where(mul[a] == 1)[0][0])
        self.inv_table = inv
        # plain python copies for scalar loops
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inv.tolist()
        for t in (add, mul, self.neg_table, inv):
            t.setflags(write=False)

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.q})"
        return f"GF({self.q}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise MixedStructureError("element of a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self._encode([c % self.p for c in value]))
        value = int(value)
        if self.k == 1:
            return FieldElement(self, value % self.p)
        if not 0 <= value < self.q:
            raise ValueError("encoded value out of range")
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def __len__(self):
        return self.q

    @cached_property
    def primitive(self):
        """Smallest (in encoding order) generator of the multiplicative group."""
        for g in range(1, self.q):
            x, seen = 1, set()
            while x not in seen:
                seen.add(x)
                x = self._mul[x][g]
            if len(seen) == self.q - 1:
                return g
        raise AssertionError("multiplicative group is cyclic")

    @cached_property
    def additive_basis(self):
        """Encodings of 1, x, ..., x^{k-1}; they generate (F_q, +)."""
        return tuple(self.p ** i for i in range(self.k))

    # scalar helpers on encoded ints
    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        if a == 0:
            raise NotInvertibleError("division by zero in " + repr(self))
        return self._inv[a]

    # batched matrix product over the field
    def batch_matmul(self, a, b):
        """Matrix product over F_q for stacked integer arrays (numpy broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return np.matmul(a, b) % self.p
        n = a.shape[-1]
        acc = None
        for t in range(n):
            term = self.mul_table[a[..., :, t, None], b[..., None, t, :]]
            acc = term if acc is None else self.add_table[acc, term]
        return acc


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FiniteField
    value: int

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedStructureError("operands from different fields")
            return other.value
        if isinstance(other, int):
            return self.field(other).value
        raise MixedStructureError(f"cannot combine field element with {type(other).__name__}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return self * FieldElement(self.field, self._other(other)).inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = 1
        for _ in range(e):
            r = self.field.mul(r, self.value)
        return FieldElement(self.field, r)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == self.field(other).value
        return isinstance(other, FieldElement) and other.field == self.field and other.value == self.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __lt__(self, other):
        return self.value < self._other(other)

    def __bool__(self):
        return self.value != 0

    def coefficients(self):
        return tuple(self.field._digits(self.value))

    def __repr__(self):
        if self.field.k == 1:
            return str(self.value)
        terms = []
        for i, c in enumerate(self.coefficients()):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}{mono}")
        return " + ".join(reversed(terms)) or "0"


# ---------------------------------------------------------------------------
# matrices over F_q as tuples of tuples of encoded ints

def _check_square(m):
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    return n


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(field, a, b):
    if len(a[0]) != len(b):
        raise ValueError(f"dimension mismatch {len(a)}x{len(a[0])} * {len(b)}x{len(b[0])}")
    add, mul = field._add, field._mul
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add[acc][mul[x][y]]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def _eliminate(field, m, rhs=None):
    """Gauss-Jordan elimination; returns (det, reduced rhs)."""
    n = _check_square(m)
    rows = [list(r) for r in m]
    aug = [list(r) for r in rhs] if rhs is not None else None
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return 0, None
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            if aug is not None:
                aug[c], aug[piv] = aug[piv], aug[c]
            det = field.neg(det)
        pv = rows[c][c]
        det = field.mul(det, pv)
        iv = field.inv(pv)
        rows[c] = [field.mul(iv, x) for x in rows[c]]
        if aug is not None:
            aug[c] = [field.mul(iv, x) for x in aug[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(rows[r], rows[c])]
                if aug is not None:
                    aug[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(aug[r], aug[c])]
    return det, aug


def mat_det(field, m):
    det, _ = _eliminate(field, m)
    return det


def mat_inv(field, m):
    n = _check_square(m)
    det, aug = _eliminate(field, m, mat_identity(n))
    if det == 0:
        raise NotInvertibleError("singular matrix")
    return tuple(tuple(r) for r in aug)


# ---------------------------------------------------------------------------
# Z[sqrt2, sqrt3]

def _sign_z2(a, b):
    """Sign of a + b*sqrt2."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    d = a * a - 2 * b * b
    return sa if d > 0 else (sb if d < 0 else 0)


class QuadInt:
    """a + b*sqrt2 + c*sqrt3 + d*sqrt6 with integer coefficients."""

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a, self.b, self.c, self.d = int(a), int(b), int(c), int(d)
        self._hash = hash((self.a, self.b, self.c, self.d))

    @property
    def coeffs(self):
        return (self.a, self.b, self.c, self.d)

    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadInt):
            return x
        if isinstance(x, int):
            return QuadInt(x)
        raise MixedStructureError(f"cannot combine QuadInt with {type(x).__name__}")

    def __add__(self, o):
        o = self._coerce(o)
        return QuadInt(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return QuadInt(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj2(self):
        """Automorphism sqrt2 -> -sqrt2."""
        return QuadInt(self.a, -self.b, self.c, -self.d)

    def conj3(self):
        """Automorphism sqrt3 -> -sqrt3."""
        return QuadInt(self.a, self.b, -self.c, -self.d)

    def norm(self):
        n = self * self.conj2() * self.conj3() * self.conj2().conj3()
        assert n.b == n.c == n.d == 0
        return n.a

    def inverse(self):
        n = self.norm()
        if n not in (1, -1):
            raise NotInvertibleError(f"{self} is not a unit of Z[sqrt2, sqrt3]")
        rest = self.conj2() * self.conj3() * self.conj2().conj3()
        return rest * n

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __eq__(self, o):
        if isinstance(o, int):
            o = QuadInt(o)
        return isinstance(o, QuadInt) and self.coeffs == o.coeffs

    def __hash__(self):
        return self._hash

    def is_zero(self):
        return not (self.a or self.b or self.c or self.d)

    def sign(self):
        """Exact sign of the real number, via squaring in Z[sqrt2]."""
        # value = P + sqrt3 * Q with P = a + b sqrt2, Q = c + d sqrt2
        sp = _sign_z2(self.a, self.b)
        sq = _sign_z2(self.c, self.d)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq if sp == 0 else sp
        # opposite signs: compare P^2 with 3 Q^2
        p2 = (self.a * self.a + 2 * self.b * self.b, 2 * self.a * self.b)
        q2 = (3 * (self.c * self.c + 2 * self.d * self.d), 6 * self.c * self.d)
        s = _sign_z2(p2[0] - q2[0], p2[1] - q2[1])
        return sp if s > 0 else (sq if s < 0 else 0)

    def __float__(self):
        return self.a + self.b * 2 ** 0.5 + self.c * 3 ** 0.5 + self.d * 6 ** 0.5

    def __repr__(self):
        parts = []
        for coef, sym in zip(self.coeffs, ("", "√2", "√3", "√6")):
            if coef:
                parts.append(f"{coef}{sym}" if sym == "" or abs(coef) != 1 else ("-" if coef < 0 else "") + sym)
        return "QuadInt(" + (" + ".join(parts) if parts else "0") + ")"


SQRT2 = QuadInt(0, 1)
SQRT3 = QuadInt(0, 0, 1)


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass
class SNFResult:
    factors: list          # nonzero invariant factors d_1 | d_2 | ... | d_r
    rank: int
    shape: tuple
    left: list | None = None   # U with U * M * V = D
    right: list | None = None

    def diagonal(self):
        rows, cols = self.shape
        d = [[0] * cols for _ in range(rows)]
        for i, f in enumerate(self.factors):
            d[i][i] = f
        return d


def _int_matmul(a, b):
    cols = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def int_matmul(a, b):
    return _int_matmul(a, b)


def smith_normal_form(m, transforms=False):
    """Smith normal form of an integer matrix (list of rows).

    Pivots are chosen by minimal absolute value.  With ``transforms=True``
    the unimodular ``left`` and ``right`` satisfy ``left * m * right = D``.
    """
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    left = [[int(i == j) for j in range(rows)] for i in range(rows)] if transforms else None
    right = [[int(i == j) for j in range(cols)] for i in range(cols)] if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if transforms:
            left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transforms:
            for row in right:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        ra, rs = a[dst], a[src]
        for k in range(cols):
            if rs[k]:
                ra[k] += f * rs[k]
        if transforms:
            la, ls = left[dst], left[src]
            for k in range(rows):
                la[k] += f * ls[k]

    def add_col(dst, src, f):
        for row in a:
            if row[src]:
                row[dst] += f * row[src]
        if transforms:
            for row in right:
                row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # move the smallest entry of row/column t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if transforms:
                left[t] = [-x for x in left[t]]
        t += 1

    factors = [a[i][i] for i in range(min(rows, cols)) if a[i][i]]
    return SNFResult(factors=factors, rank=len(factors), shape=(rows, cols), left=left, right=right)
