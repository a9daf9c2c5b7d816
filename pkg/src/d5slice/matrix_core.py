"""Fixed-size 2x2 and 4x4 matrices over an exact coefficient ring.

Entries may be ``Fraction``, :class:`~d5slice.exact_algebra.MPoly` or
:class:`~d5slice.exact_algebra.RatFunc`; plain ints are promoted to
``Fraction`` on construction.  Determinants are division-free so they work
over polynomial rings.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Sequence

from d5slice.exact_algebra import MPoly, RatFunc, format_rational, parse_rational

__all__ = ["Mat2", "Mat4", "SingularMatrixError", "char_poly4", "char_poly4_by_det", "rank"]


class SingularMatrixError(ArithmeticError):
    """Raised when inverting a matrix whose determinant is identically zero."""


def _promote(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a matrix entry")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, MPoly, RatFunc)):
        return x
    raise TypeError(f"unsupported matrix entry type {type(x).__name__}")


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


_PERMS = {n: [(p, _perm_sign(p)) for p in permutations(range(n))] for n in (2, 3, 4)}


def _leibniz(rows: Sequence[Sequence]):
    n = len(rows)
    total = Fraction(0)
    for perm, sign in _PERMS[n]:
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        total = total + term if sign > 0 else total - term
    return total


class _SquareMatrix:
    n = 0

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(_promote(x) for x in r) for r in rows)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError(f"{type(self).__name__} needs {self.n}x{self.n} entries")
        self.rows = rows

    @classmethod
    def identity(cls):
        return cls([[1 if i == j else 0 for j in range(cls.n)] for i in range(cls.n)])

    @classmethod
    def zero(cls):
        return cls([[0] * cls.n for _ in range(cls.n)])

    @classmethod
    def diag(cls, *entries):
        if len(entries) == 1 and not isinstance(entries[0], (int, Fraction, MPoly, RatFunc)):
            entries = tuple(entries[0])
        if len(entries) != cls.n:
            raise ValueError(f"need {cls.n} diagonal entries")
        return cls([[entries[i] if i == j else 0 for j in range(cls.n)] for i in range(cls.n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, _SquareMatrix) or other.n != self.n:
            return NotImplemented
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    __hash__ = None

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"{type(self).__name__}[{body}]"

    def map(self, fn):
        return type(self)([[fn(x) for x in r] for r in self.rows])

    def __add__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return type(self)([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return type(self)([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c):
        return self.map(lambda x: c * x)

    def __mul__(self, other):
        if isinstance(other, type(self)):
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                row = []
                for col in cols:
                    acc = r[0] * col[0]
                    for k in range(1, self.n):
                        acc = acc + r[k] * col[k]
                    row.append(acc)
                out.append(row)
            return type(self)(out)
        if isinstance(other, (int, Fraction, MPoly, RatFunc)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, MPoly, RatFunc)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative matrix powers are not supported; use inverse()")
        out = type(self).identity()
        for _ in range(k):
            out = out * self
        return out

    def apply(self, v: Sequence):
        """Matrix-vector product."""
        out = []
        for r in self.rows:
            acc = r[0] * v[0]
            for k in range(1, self.n):
                acc = acc + r[k] * v[k]
            out.append(acc)
        return out

    def quadratic_form(self, v: Sequence):
        """``v^T A v``."""
        w = self.apply(v)
        acc = v[0] * w[0]
        for k in range(1, self.n):
            acc = acc + v[k] * w[k]
        return acc

    def transpose(self):
        return type(self)(list(zip(*self.rows)))

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, self.n):
            acc = acc + self.rows[i][i]
        return acc

    def det(self):
        return _leibniz(self.rows)

    def is_symmetric(self) -> bool:
        return all(self.rows[i][j] == self.rows[j][i] for i in range(self.n) for j in range(i))

    def is_trace_zero(self) -> bool:
        return self.trace() == 0

    def minor(self, i: int, j: int):
        return [[x for c, x in enumerate(r) if c != j] for k, r in enumerate(self.rows) if k != i]

    def adjugate(self):
        n = self.n
        if n == 2:
            (a, b), (c, d) = self.rows
            return type(self)([[d, -b], [-c, a]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                m = _leibniz(self.minor(i, j))
                cof[j][i] = m if (i + j) % 2 == 0 else -m
        return type(self)(cof)

    def inverse(self):
        """Exact inverse; entries become RatFunc when the determinant is a non-constant polynomial."""
        d = self.det()
        if d == 0:
            raise SingularMatrixError("matrix determinant is identically zero")
        if isinstance(d, MPoly) and d.is_constant():
            d = d.constant_value()
        adj = self.adjugate()
        if isinstance(d, Fraction):
            inv_d = 1 / d
            return adj.map(lambda x: inv_d * x)
        return adj.map(lambda x: RatFunc(x) / d if not isinstance(x, RatFunc) else x / d)

    def subs(self, assignment):
        def sub(x):
            return x.subs(assignment) if isinstance(x, (MPoly, RatFunc)) else x
        return self.map(sub)

    def eval(self, assignment):
        def ev(x):
            return x.eval(assignment) if isinstance(x, (MPoly, RatFunc)) else x
        return self.map(ev)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list):
            raise ValueError("matrix JSON must be a list of rows")
        return cls([[parse_rational(x) for x in row] for row in data])

    def to_float(self):
        import numpy as np

        return np.array([[complex(float(x)) for x in r] for r in self.rows])


class Mat2(_SquareMatrix):
    """2x2 matrix; elements of sl(2) are the trace-zero ones."""

    n = 2
    __slots__ = ()


class Mat4(_SquareMatrix):
    """4x4 matrix, typically symmetric (a quadratic form on C^4)."""

    n = 4
    __slots__ = ()


def char_poly4(a: Mat4):
    """Coefficients ``(c1, c2, c3, c4)`` of ``t^4 - c1 t^3 + c2 t^2 - c3 t + c4``.

    Computed from the power traces ``tr(A^k)`` by Newton's identities.
    """
    a2 = a * a
    a3 = a2 * a
    p1, p2, p3, p4 = a.trace(), a2.trace(), a3.trace(), (a2 * a2).trace()
    c1 = p1
    c2 = (c1 * p1 - p2) / 2
    c3 = (c2 * p1 - c1 * p2 + p3) / 3
    c4 = (c3 * p1 - c2 * p2 + c1 * p3 - p4) / 4
    return c1, c2, c3, c4


def char_poly4_by_det(a: Mat4, t):
    """``det(t I - A)`` evaluated at ``t`` by direct expansion (an oracle for char_poly4)."""
    return (Mat4.identity().scale(t) - a).det()


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-free elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r, prev = 0, Fraction(1)
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) / prev
            m[i][c] = Fraction(0)
        prev = m[r][c]
        r += 1
        if r == nrows:
            break
    return r
