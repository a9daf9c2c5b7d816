"""Good subspaces and good slices of sl(2) + sl(2).

A good subspace is spanned by ``x = (x_s, x_n)`` and ``y = (y_n, y_s)`` with
``x_s, y_s`` semisimple and ``x_n, y_n`` nilpotent.  Up to conjugation it is
pinned down by two numbers ``(p, q)``; its Killing-orthogonal complement
meets the nilpotent variety in a surface whose pencil of quadrics and
j-invariant depend only on ``t = pq``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

import numpy as np

from d5slice.exact_algebra import MPoly, format_rational, parse_rational
from d5slice.matrix_core import Mat2, Mat4
from d5slice.pencil import SymPencil

__all__ = [
    "DegenerateSliceError",
    "GElem",
    "GoodPairRaw",
    "H",
    "INF",
    "NeedsNumericExtension",
    "Normalization",
    "SliceSpec",
    "X_INF",
    "good_slice_equations",
    "is_degenerate",
    "j_closed_form",
    "j_of_t",
    "killing_form",
    "nilpotent_normal_form",
    "normal_form_defect",
    "normal_form_pair",
    "normalize_exact",
    "normalize_good_pair",
    "normalize_numeric",
    "pencil_from_pq",
    "slice_equations_from_killing",
    "variety_by_elimination",
    "variety_equations",
]


class _Infinity:
    """Marker for the second alternative ``x_n = (0 0; 1 0)`` of the normal form."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Coord = Union[Fraction, MPoly, complex, _Infinity]


class DegenerateSliceError(ValueError):
    """``t = pq`` lies in {0, 1/4} or a coordinate is infinite: no D5-tilde singularity."""


class NeedsNumericExtension(ArithmeticError):
    """Exact normalisation needs the square root of a non-square rational."""


H = Mat2([[1, 0], [0, -1]])
E = Mat2([[0, 1], [0, 0]])
F = Mat2([[0, 0], [1, 0]])
X_INF = F


@dataclass(frozen=True)
class SliceSpec:
    p: Coord
    q: Coord

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))

    @classmethod
    def symbolic(cls) -> "SliceSpec":
        return cls(MPoly.var("p"), MPoly.var("q"))

    @property
    def is_finite(self) -> bool:
        return self.p is not INF and self.q is not INF

    @property
    def t(self):
        if not self.is_finite:
            raise DegenerateSliceError("t = pq is undefined at an infinity marker")
        return self.p * self.q

    def require_finite(self) -> "SliceSpec":
        if not self.is_finite:
            raise DegenerateSliceError("no formula is available at an infinity marker")
        return self

    def to_json(self) -> dict:
        def enc(v):
            if v is INF:
                return "inf"
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return format_rational(v)
        return {"p": enc(self.p), "q": enc(self.q)}

    @classmethod
    def from_json(cls, data: dict) -> "SliceSpec":
        return cls(parse_coord(data["p"]), parse_coord(data["q"]))


def parse_coord(text) -> Coord:
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "∞"):
        return INF
    return parse_rational(text)


@dataclass(frozen=True)
class GElem:
    """``((a, b; c, -a), (d, e; f, -d))`` in sl(2) + sl(2)."""

    a: object = Fraction(0)
    b: object = Fraction(0)
    c: object = Fraction(0)
    d: object = Fraction(0)
    e: object = Fraction(0)
    f: object = Fraction(0)

    def __post_init__(self):
        for name in "abcdef":
            v = getattr(self, name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(v))

    @classmethod
    def from_mats(cls, z1: Mat2, z2: Mat2) -> "GElem":
        z1, z2 = Mat2(z1.rows if isinstance(z1, Mat2) else z1), Mat2(z2.rows if isinstance(z2, Mat2) else z2)
        if not (z1.is_trace_zero() and z2.is_trace_zero()):
            raise ValueError("both components of an element of sl(2)+sl(2) must be trace-free")
        return cls(z1[0, 0], z1[0, 1], z1[1, 0], z2[0, 0], z2[0, 1], z2[1, 0])

    @classmethod
    def symbolic(cls) -> "GElem":
        return cls(*(MPoly.var(v) for v in "abcdef"))

    @property
    def first(self) -> Mat2:
        return Mat2([[self.a, self.b], [self.c, -self.a]])

    @property
    def second(self) -> Mat2:
        return Mat2([[self.d, self.e], [self.f, -self.d]])

    def __add__(self, other: "GElem") -> "GElem":
        return GElem(*(getattr(self, n) + getattr(other, n) for n in "abcdef"))

    def scale(self, k) -> "GElem":
        return GElem(*(k * getattr(self, n) for n in "abcdef"))

    def to_json(self) -> dict:
        return {n: format_rational(getattr(self, n)) for n in "abcdef"}

    @classmethod
    def from_json(cls, data: dict) -> "GElem":
        return cls(*(parse_rational(data[n]) for n in "abcdef"))


def killing_form(z: GElem, w: GElem):
    """``<z, w> = 4 (tr(z1 w1) + tr(z2 w2))``."""
    return 4 * ((z.first * w.first).trace() + (z.second * w.second).trace())


def _is_nonzero(m: Mat2) -> bool:
    return any(x != 0 for row in m for x in row)


@dataclass(frozen=True)
class GoodPairRaw:
    """Basis ``x = (x_s, x_n)``, ``y = (y_n, y_s)`` of a good subspace."""

    x: GElem
    y: GElem

    def __post_init__(self):
        xs, xn = self.x.first, self.x.second
        yn, ys = self.y.first, self.y.second
        if xs.det() == 0:
            raise ValueError("x_s must be a nonzero semisimple element")
        if ys.det() == 0:
            raise ValueError("y_s must be a nonzero semisimple element")
        if xn.det() != 0 or not _is_nonzero(xn):
            raise ValueError("x_n must be a nonzero nilpotent element")
        if yn.det() != 0 or not _is_nonzero(yn):
            raise ValueError("y_n must be a nonzero nilpotent element")


def nilpotent_normal_form(coord) -> Mat2:
    """``(c 1; -c^2 -c)``, or ``(0 0; 1 0)`` for the infinity marker."""
    if coord is INF:
        return X_INF
    return Mat2([[coord, 1], [-coord * coord, -coord]])


def normal_form_pair(spec: SliceSpec) -> tuple[GElem, GElem]:
    """The normalised basis ``x = (H, x_n(p))``, ``y = (y_n(q), H)``."""
    xn = nilpotent_normal_form(spec.p)
    yn = nilpotent_normal_form(spec.q)
    return GElem.from_mats(H, xn), GElem.from_mats(yn, H)


# -- normalisation ----------------------------------------------------------


@dataclass(frozen=True)
class Normalization:
    """Outcome of conjugating a good pair into normal form.

    ``P`` and ``Q`` act on the first and second sl(2) factors; ``x_scale`` and
    ``y_scale`` are the multipliers making ``det x_s = det y_s = -1``.
    Entries are Fractions on the exact path and complex numbers otherwise.
    """

    spec: SliceSpec
    P: object
    Q: object
    x_scale: object
    y_scale: object
    exact: bool


def _rational_sqrt(x: Fraction) -> Fraction:
    if x < 0:
        raise NeedsNumericExtension(f"sqrt({x}) is not rational")
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise NeedsNumericExtension(f"sqrt({x}) is not rational")
    return Fraction(n, d)


def _kernel_vector(m):
    """Nonzero kernel vector of a singular 2x2, first nonzero entry scaled to 1."""
    (m00, m01), (m10, m11) = m
    if abs(m00) + abs(m01) > abs(m10) + abs(m11):
        v = [m01, -m00]
    else:
        v = [m11, -m10]
    lead = v[0] if v[0] != 0 else v[1]
    return [v[0] / lead, v[1] / lead]


def _diagonalizer(s, one):
    """P with det 1 and ``P^-1 s P = H`` for trace-free ``s`` with ``det s = -1``."""
    (s00, s01), (s10, s11) = s
    v1 = _kernel_vector([[s00 - one, s01], [s10, s11 - one]])
    v2 = _kernel_vector([[s00 + one, s01], [s10, s11 + one]])
    det = v1[0] * v2[1] - v2[0] * v1[1]
    v2 = [v2[0] / det, v2[1] / det]
    return [[v1[0], v2[0]], [v1[1], v2[1]]]


def _mul2(a, b):
    return [[a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]]]


def _inv2_sl(a):
    return [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]


def _conj(g, m):
    return _mul2(_inv2_sl(g), _mul2(m, g))


def _rows(m: Mat2):
    return [list(r) for r in m.rows]


def _blocks(pair: GoodPairRaw, convert):
    return tuple([[convert(v) for v in r] for r in m.rows]
                 for m in (pair.x.first, pair.x.second, pair.y.first, pair.y.second))


def _normalize(blocks, sqrt, one, is_zero):
    xs, xn, yn, ys = blocks

    def det(m):
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    sx = sqrt(-one / det(xs))
    sy = sqrt(-one / det(ys))
    xs = [[sx * v for v in r] for r in xs]
    xn = [[sx * v for v in r] for r in xn]
    yn = [[sy * v for v in r] for r in yn]
    ys = [[sy * v for v in r] for r in ys]
    # P conjugates the first factor (x_s, y_n), Q the second (x_n, y_s).
    P0 = _diagonalizer(xs, one)
    Q0 = _diagonalizer(ys, one)
    zero = one - one

    def finish(g0, nil):
        m = _conj(g0, nil)
        alpha, beta, gamma = m[0][0], m[0][1], m[1][0]
        if not is_zero(beta, m):
            r = sqrt(beta)
            return alpha, _mul2(g0, [[r, zero], [zero, one / r]])
        r = sqrt(gamma)
        return INF, _mul2(g0, [[one / r, zero], [zero, r]])

    p, Q = finish(Q0, xn)
    q, P = finish(P0, yn)
    return p, q, P, Q, sx, sy


def normalize_exact(pair: GoodPairRaw) -> Normalization:
    """Exact normal form; raises NeedsNumericExtension if a square root is irrational."""
    blocks = _blocks(pair, Fraction)
    p, q, P, Q, sx, sy = _normalize(blocks, _rational_sqrt, Fraction(1), lambda v, m: v == 0)
    return Normalization(SliceSpec(p, q), Mat2(P), Mat2(Q), sx, sy, exact=True)


def normalize_numeric(pair: GoodPairRaw, tol: float = 1e-12) -> Normalization:
    """Floating-point normal form over C, where every square root exists."""
    def is_zero(v, m):
        scale = max(abs(x) for r in m for x in r)
        return abs(v) <= tol * max(scale, 1.0)

    blocks = _blocks(pair, complex)
    p, q, P, Q, sx, sy = _normalize(blocks, cmath.sqrt, complex(1), is_zero)
    return Normalization(SliceSpec(p, q), np.array(P), np.array(Q), sx, sy, exact=False)


def normalize_good_pair(pair: GoodPairRaw) -> Normalization:
    """Exact normalisation when possible, otherwise the numeric one."""
    try:
        return normalize_exact(pair)
    except NeedsNumericExtension:
        return normalize_numeric(pair)


def normal_form_defect(pair: GoodPairRaw, result: Normalization) -> float:
    """Max-norm residual of the conjugated, rescaled basis against the normal forms."""
    P = np.array(result.P, dtype=complex) if not result.exact else np.array(
        [[complex(v) for v in r] for r in result.P.rows])
    Q = np.array(result.Q, dtype=complex) if not result.exact else np.array(
        [[complex(v) for v in r] for r in result.Q.rows])

    def arr(m: Mat2):
        return np.array([[complex(v) for v in r] for r in m.rows])

    def nf(coord):
        if coord is INF:
            return arr(X_INF)
        c = complex(coord)
        return np.array([[c, 1], [-c * c, -c]])

    sx, sy = complex(result.x_scale), complex(result.y_scale)
    h = arr(H)
    Pi, Qi = np.linalg.inv(P), np.linalg.inv(Q)
    residuals = [
        Pi @ (sx * arr(pair.x.first)) @ P - h,
        Qi @ (sx * arr(pair.x.second)) @ Q - nf(result.spec.p),
        Pi @ (sy * arr(pair.y.first)) @ P - nf(result.spec.q),
        Qi @ (sy * arr(pair.y.second)) @ Q - h,
        np.array([[np.linalg.det(P) - 1, np.linalg.det(Q) - 1]]),
    ]
    return float(max(np.max(np.abs(r)) for r in residuals))


# -- slice, variety, pencil, j ------------------------------------------------


def _coords(spec: SliceSpec):
    spec.require_finite()
    return spec.p, spec.q


def good_slice_equations(spec: SliceSpec) -> tuple[MPoly, MPoly]:
    """Linear forms ``(2a + 2pd - p^2 e + f, 2qa - q^2 b + c + 2d)`` cutting out the slice."""
    p, q = _coords(spec)
    a, b, c, d, e, f = (MPoly.var(v) for v in "abcdef")
    return 2 * a + 2 * p * d - p * p * e + f, 2 * q * a - q * q * b + c + 2 * d


def slice_equations_from_killing(spec: SliceSpec) -> tuple[MPoly, MPoly]:
    """``(<Z, x>/4, <Z, y>/4)`` for a symbolic Z and the normalised basis x, y."""
    _coords(spec)
    x, y = normal_form_pair(spec)
    z = GElem.symbolic()
    return killing_form(z, x) / 4, killing_form(z, y) / 4


def variety_equations(spec: SliceSpec) -> tuple[MPoly, MPoly]:
    """The two quadrics ``g1, g2`` in ``(a, b, d, e)`` after eliminating c and f."""
    p, q = _coords(spec)
    a, b, d, e = (MPoly.var(v) for v in "abde")
    g1 = a**2 - 2 * q * a * b + q * q * b**2 - 2 * b * d
    g2 = -2 * a * e + d**2 - 2 * p * d * e + p * p * e**2
    return g1, g2


def variety_by_elimination(spec: SliceSpec) -> tuple[MPoly, MPoly]:
    """``(a^2 + bc, d^2 + ef)`` with c and f solved from the slice equations."""
    l1, l2 = good_slice_equations(spec)
    a, b, c, d, e, f = (MPoly.var(v) for v in "abcdef")
    sol = {"c": c - l2, "f": f - l1}
    return (a**2 + b * c).subs(sol), (d**2 + e * f).subs(sol)


def pencil_from_pq(spec: SliceSpec) -> SymPencil:
    """Symmetric X, Y with ``v^T X v = g1`` and ``v^T Y v = g2`` for ``v = (a, b, d, e)``."""
    p, q = _coords(spec)
    X = Mat4([[1, -q, 0, 0],
              [-q, q * q, -1, 0],
              [0, -1, 0, 0],
              [0, 0, 0, 0]])
    Y = Mat4([[0, 0, 0, -1],
              [0, 0, 0, 0],
              [0, 0, 1, -p],
              [-1, 0, -p, p * p]])
    return SymPencil(X, Y)


def _t_is_degenerate(t) -> bool:
    return t == 0 or 4 * t - 1 == 0


def is_degenerate(spec: SliceSpec) -> bool:
    """True at infinity markers and where ``t = pq`` is 0 or 1/4."""
    if not spec.is_finite:
        return True
    return _t_is_degenerate(spec.t)


def j_of_t(t):
    """``256 (t^6 - 12t^5 + 51t^4 - 88t^3 + 51t^2 - 12t + 1) / (t^4 (1 - 4t))``."""
    if isinstance(t, int):
        t = Fraction(t)
    if _t_is_degenerate(t):
        raise DegenerateSliceError(f"t = {t} is 0 or 1/4")
    num = 256 * (t**6 - 12 * t**5 + 51 * t**4 - 88 * t**3 + 51 * t**2 - 12 * t + 1)
    return num / (t**4 * (1 - 4 * t))


def j_closed_form(spec: SliceSpec):
    """j-invariant of the exceptional curve as a function of ``t = pq``."""
    if not spec.is_finite:
        raise DegenerateSliceError("no D5-tilde singularity at an infinity marker")
    return j_of_t(spec.t)
