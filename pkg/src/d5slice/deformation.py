"""Tjurina module and semi-universal deformation of the slice singularity.

Elements of ``O^2`` are :class:`PolyVecPair` values whose components are
rational functions in ``(p, q, a, b, d, e)``; the only denominators that ever
occur are ``4pq - 1`` and ``2p^2 q``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from d5slice.exact_algebra import MPoly, RatFunc, format_rational, parse_rational
from d5slice.good_slice import (
    H,
    X_INF,
    DegenerateSliceError,
    GElem,
    SliceSpec,
    killing_form,
    normal_form_pair,
    variety_equations,
)

__all__ = [
    "BW_MAX_M",
    "DeformationPoint",
    "DerivedRelations",
    "PolyVecPair",
    "SPAN_SET",
    "T1_BASIS",
    "adjoint_quotient",
    "aff_dimension",
    "aff_dimension_grassmann",
    "bw_binomial_sum",
    "bw_sequence",
    "deformed_adjoint_quotient",
    "deformed_adjoint_quotient_killing",
    "deformed_slice_residuals",
    "deformed_slice_residuals_killing",
    "derived_relations",
    "displayed_generators",
    "fiber_by_elimination",
    "jacobian_generators",
    "t1_basis",
    "t1_basis_check",
    "t1_dimension_truncated",
    "total_space_equations",
]

BW_MAX_M = 10_000
_VARS = ("a", "b", "d", "e")


def _rf(x) -> RatFunc:
    return x if isinstance(x, RatFunc) else RatFunc(x)


@dataclass(frozen=True, eq=False)
class PolyVecPair:
    """An element ``(first, second)`` of ``O^2``."""

    first: RatFunc
    second: RatFunc

    def __post_init__(self):
        object.__setattr__(self, "first", _rf(self.first))
        object.__setattr__(self, "second", _rf(self.second))

    def __add__(self, other: "PolyVecPair") -> "PolyVecPair":
        return PolyVecPair(self.first + other.first, self.second + other.second)

    def __sub__(self, other: "PolyVecPair") -> "PolyVecPair":
        return PolyVecPair(self.first - other.first, self.second - other.second)

    def __neg__(self) -> "PolyVecPair":
        return PolyVecPair(-self.first, -self.second)

    def __rmul__(self, k) -> "PolyVecPair":
        return PolyVecPair(k * self.first, k * self.second)

    def __eq__(self, other):
        if not isinstance(other, PolyVecPair):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    __hash__ = None

    def subs(self, assignment) -> "PolyVecPair":
        return PolyVecPair(self.first.subs(assignment), self.second.subs(assignment))

    def polys(self) -> tuple[MPoly, MPoly]:
        """Both components as polynomials (raises if a denominator survives)."""
        return self.first.as_poly(), self.second.as_poly()

    def total_degree(self) -> int:
        return max(_degree_in(c.as_poly(), _VARS) for c in (self.first, self.second))

    def __str__(self):
        return f"({self.first}, {self.second})"


def _degree_in(f: MPoly, names) -> int:
    idx = [i for i, v in enumerate(f.variables) if v in names]
    return max((sum(exps[i] for i in idx) for exps in f.terms), default=-1)


def _vars():
    return tuple(MPoly.var(v) for v in _VARS)


def _require_admissible(spec: SliceSpec) -> None:
    spec.require_finite()
    t = spec.t
    if t == 0 or 4 * t - 1 == 0:
        raise DegenerateSliceError(f"t = pq = {t} is 0 or 1/4")


def jacobian_generators(spec: SliceSpec) -> dict[int, PolyVecPair]:
    """``v1 .. v8``: the equations in each slot and halved partial derivatives."""
    spec.require_finite()
    g1, g2 = variety_equations(spec)
    half = Fraction(1, 2)

    def grad(var, sign):
        return PolyVecPair(sign * half * g1.diff(var), sign * half * g2.diff(var))

    zero = MPoly.const(0)
    return {
        1: PolyVecPair(g1, zero),
        2: PolyVecPair(g2, zero),
        3: PolyVecPair(zero, g1),
        4: PolyVecPair(zero, g2),
        5: grad("a", 1),
        6: grad("b", -1),
        7: grad("d", -1),
        8: grad("e", -1),
    }


def displayed_generators(spec: SliceSpec) -> dict[int, PolyVecPair]:
    """Closed forms of ``v5 .. v8`` written out by hand."""
    p, q = spec.require_finite().p, spec.q
    a, b, d, e = _vars()
    return {
        5: PolyVecPair(a - q * b, -e),
        6: PolyVecPair(q * a - q * q * b + d, 0),
        7: PolyVecPair(b, -d + p * e),
        8: PolyVecPair(0, a + p * d - p * p * e),
    }


@dataclass(frozen=True)
class DerivedRelations:
    vectors: dict[int, PolyVecPair]
    checks: dict[str, bool]

    @property
    def all_hold(self) -> bool:
        return all(self.checks.values())


def _expected_derived(p, q):
    a, b, d, e = _vars()
    return {
        9: PolyVecPair(a, -e - q * d + p * q * e),
        10: PolyVecPair(d, q * e),
        11: PolyVecPair(p**2 * e**2, -3 * q * d * e + (4 * p * q - 2) * e**2),
        12: PolyVecPair(0, q**2 * b**2 + (2 * p * q - 2) * b * d - 2 * p**2 * q * b * e
                        + p**2 * d**2 - 2 * p**3 * d * e + p**4 * e**2),
        13: PolyVecPair(0, q * b * d + (1 - p * q) * b * e + p * d**2
                        - 2 * p**2 * d * e + p**3 * e**2),
        14: PolyVecPair(0, q * b * e + d**2 - p * d * e),
        15: PolyVecPair(0, d**2 - p**2 * e**2),
        16: PolyVecPair(0, -2 * p**2 * q * e**2 + (2 * p * q - 1) * d * e),
        17: PolyVecPair(0, d**2 * e),
        18: PolyVecPair(0, d * e**2),
    }


def derived_relations(spec: SliceSpec) -> DerivedRelations:
    """Build ``v9 .. v18`` from their defining combinations and check each closed form.

    Works for rational ``(p, q)`` and for the symbolic spec, in which case
    every check is an identity over ``Q(p, q)``.
    """
    _require_admissible(spec)
    p, q = spec.p, spec.q
    a, b, d, e = _vars()
    v = dict(jacobian_generators(spec))
    v[9] = v[5] + q * v[7]
    v[10] = v[6] - q * v[5]
    v[11] = v[2] + 2 * e * v[9] + (2 * p * e - d) * v[10]
    v[12] = v[3] + (-a + 2 * q * b + p * d - p**2 * e) * v[8]
    v[13] = a * v[7] + (d - p * e) * v[8] - b * v[9]
    v[14] = -d * v[7] + b * v[10]
    v[15] = v[4] + 2 * e * v[8]
    v[16] = q * v[4] + 3 * q * e * v[8] + d * v[9] - a * v[10]
    v[17] = RatFunc(1) / RatFunc(4 * p * q - 1) * (
        4 * p**2 * q**2 * e * v[15] - (2 * p * q - 1) * d * v[16] - 2 * p**2 * q * e * v[16])
    v[18] = RatFunc(1) / RatFunc(2 * p**2 * q) * (-d * v[16] + (2 * p * q - 1) * v[17])

    checks: dict[str, bool] = {}
    for i, form in displayed_generators(spec).items():
        checks[f"v{i} closed form"] = v[i] == form
    for i, form in _expected_derived(p, q).items():
        checks[f"v{i} closed form"] = v[i] == form
    zero = MPoly.const(0)
    checks["(0,d) rewrite"] = PolyVecPair(zero, d) == (
        -v[7] + PolyVecPair(b, zero) + p * PolyVecPair(zero, e))
    checks["(0,de) rewrite"] = PolyVecPair(zero, d * e) == (
        2 * q * e * v[8] - 2 * q * PolyVecPair(zero, a * e) - v[16])
    return DerivedRelations(v, checks)


def _pair(x, y) -> PolyVecPair:
    return PolyVecPair(MPoly.const(x) if isinstance(x, int) else x,
                       MPoly.const(y) if isinstance(y, int) else y)


def _t1_basis_pairs():
    a, b, d, e = _vars()
    return (_pair(1, 0), _pair(b, 0), _pair(e, 0), _pair(0, 1), _pair(0, b),
            _pair(0, a * e), _pair(0, e))


def _span_set_pairs():
    a, b, d, e = _vars()
    return (_pair(1, 0), _pair(e, 0), _pair(0, 1), _pair(0, b), _pair(0, d),
            _pair(0, e), _pair(0, d * e))


T1_BASIS = _t1_basis_pairs()
#: The spanning set found first, before the two rewrites.
SPAN_SET = _span_set_pairs()


def t1_basis(spec: SliceSpec) -> tuple[PolyVecPair, ...]:
    """``(1,0), (b,0), (e,0), (0,1), (0,b), (0,ae), (0,e)`` for admissible ``(p, q)``."""
    _require_admissible(spec)
    return T1_BASIS


# -- truncated T^1 dimension ---------------------------------------------------


def _monomials(bound: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(bound + 1):
        for combo in combinations_with_replacement(range(4), deg):
            exps = [0, 0, 0, 0]
            for i in combo:
                exps[i] += 1
            out.append(tuple(exps))
    return out


def _rational_generators(spec: SliceSpec):
    if not all(isinstance(x, Fraction) for x in (spec.p, spec.q)):
        raise TypeError("t1_dimension_truncated needs rational p and q")
    out = []
    for vec in jacobian_generators(spec).values():
        comps = []
        for comp in (vec.first, vec.second):
            poly = comp.as_poly().embed(_VARS)
            if poly.variables != _VARS:
                raise ValueError("generator depends on variables other than a, b, d, e")
            comps.append(poly.terms)
        out.append(comps)
    return out


def _as_terms(vec: PolyVecPair):
    return [comp.as_poly().embed(_VARS).terms for comp in (vec.first, vec.second)]


class _Echelon:
    """Sparse row echelon form over Q; rows are {column: Fraction}."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def add(self, row: dict[int, Fraction]) -> bool:
        row = dict(row)
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                inv = 1 / row[col]
                self.pivots[col] = {k: v * inv for k, v in row.items()}
                return True
            factor = row[col]
            for k, v in piv.items():
                s = row.get(k, 0) - factor * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _module_rows(spec: SliceSpec, bound: int, extra=()):
    monos = _monomials(bound)
    col = {}
    for comp in range(2):
        for m in monos:
            col[(comp, m)] = len(col)

    def rows_for(terms_pair, shift_monos):
        for shift in shift_monos:
            row: dict[int, Fraction] = {}
            for comp, terms in enumerate(terms_pair):
                for exps, c in terms.items():
                    prod = tuple(x + y for x, y in zip(exps, shift))
                    if sum(prod) <= bound:
                        k = col[(comp, prod)]
                        row[k] = row.get(k, 0) + c
            row = {k: v for k, v in row.items() if v}
            if row:
                yield row

    gens = [rows_for(g, monos) for g in _rational_generators(spec)]
    basis_rows = [next(rows_for(_as_terms(v), [(0, 0, 0, 0)]), {}) for v in extra]
    return len(col), gens, basis_rows


def t1_dimension_truncated(spec: SliceSpec, degree_bound: int) -> int:
    """``dim A^2 / (M + deg > bound)`` for ``A = Q[a, b, d, e]`` by exact elimination.

    Stabilisation across consecutive bounds must be checked by the caller.
    """
    _require_admissible(spec)
    if degree_bound < 3:
        raise ValueError("degree_bound must be at least 3")
    ncols, gens, _ = _module_rows(spec, degree_bound)
    ech = _Echelon()
    for rows in gens:
        for row in rows:
            ech.add(row)
    return ncols - ech.rank


def t1_basis_check(spec: SliceSpec, degree_bound: int, vectors=T1_BASIS) -> bool:
    """True when ``vectors`` map to a basis of the truncated quotient."""
    _require_admissible(spec)
    ncols, gens, basis_rows = _module_rows(spec, degree_bound, vectors)
    ech = _Echelon()
    for rows in gens:
        for row in rows:
            ech.add(row)
    independent = all(ech.add(r) for r in basis_rows if r) and all(basis_rows)
    return independent and ech.rank == ncols


# -- deformations of the adjoint quotient and of the slice -----------------------


@dataclass(frozen=True)
class DeformationPoint:
    alpha: object = Fraction(0)
    beta: object = Fraction(0)
    gamma: object = Fraction(0)
    delta: object = Fraction(0)
    epsilon: object = Fraction(0)
    lam: object = Fraction(0)
    mu: object = Fraction(0)

    _JSON_KEYS = {"lam": "lambda"}

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, int) and not isinstance(v, bool):
                object.__setattr__(self, f.name, Fraction(v))

    @classmethod
    def symbolic(cls) -> "DeformationPoint":
        return cls(*(MPoly.var(n) for n in ("alpha", "beta", "gamma", "delta", "epsilon",
                                            "lambda", "mu")))

    def to_json(self) -> dict:
        return {self._JSON_KEYS.get(f.name, f.name): format_rational(getattr(self, f.name))
                for f in fields(self)}

    @classmethod
    def from_json(cls, data: dict) -> "DeformationPoint":
        if not isinstance(data, dict):
            raise ValueError("deformation point must be a JSON object")
        names = {cls._JSON_KEYS.get(f.name, f.name): f.name for f in fields(cls)}
        names["lam"] = "lam"
        unknown = set(data) - set(names)
        if unknown:
            raise ValueError(f"unknown deformation parameters: {sorted(unknown)}")
        return cls(**{names[k]: parse_rational(v) for k, v in data.items()})


def adjoint_quotient(z: GElem):
    """``(det z1, det z2) = (-a^2 - bc, -d^2 - ef)``."""
    return z.first.det(), z.second.det()


def deformed_adjoint_quotient(z: GElem, alpha, beta):
    return (-z.a**2 - z.b * z.c + 4 * alpha * z.e,
            -z.d**2 - z.e * z.f + 4 * beta * z.b)


def deformed_adjoint_quotient_killing(z: GElem, alpha, beta):
    """Same map written with the Killing form against ``(0, x_inf)`` and ``(y_inf, 0)``."""
    zero2 = X_INF.scale(0)
    det1, det2 = adjoint_quotient(z)
    return (det1 + alpha * killing_form(z, GElem.from_mats(zero2, X_INF)),
            det2 + beta * killing_form(z, GElem.from_mats(X_INF, zero2)))


def deformed_slice_residuals(z: GElem, spec: SliceSpec, gamma, delta, epsilon):
    """Left minus right sides of the two deformed slice equations."""
    p, q = spec.require_finite().p, spec.q
    r1 = 2 * z.a + 2 * gamma * z.a + 2 * p * z.d - p * p * z.e + z.f - delta
    r2 = 2 * q * z.a - q * q * z.b + 2 * z.d + z.c - epsilon
    return r1, r2


def deformed_slice_residuals_killing(z: GElem, spec: SliceSpec, gamma, delta, epsilon):
    """``(<z,x> + gamma <z,(x_s,0)> - 4 delta, <z,y> - 4 epsilon) / 4``."""
    spec.require_finite()
    x, y = normal_form_pair(spec)
    xs_only = GElem.from_mats(H, H.scale(0))
    r1 = killing_form(z, x) + gamma * killing_form(z, xs_only) - 4 * delta
    r2 = killing_form(z, y) - 4 * epsilon
    return r1 / 4, r2 / 4


def total_space_equations(spec: SliceSpec, point: DeformationPoint):
    """Fiber equations ``(h1, h2)`` of the family over the 7-dimensional base."""
    _require_admissible(spec)
    g1, g2 = variety_equations(spec)
    a, b, d, e = _vars()
    h1 = g1 - 4 * point.alpha * e + point.epsilon * b + point.lam
    h2 = g2 - 4 * point.beta * b - 2 * point.gamma * a * e + point.delta * e + point.mu
    return h1, h2


def fiber_by_elimination(spec: SliceSpec, point: DeformationPoint, lam, mu):
    """``f_(alpha,beta)(z) - (lam, mu)`` restricted to the deformed slice.

    c and f are solved from the deformed slice equations (which are linear in
    them with unit coefficient) and substituted, leaving polynomials in
    ``(a, b, d, e)``.
    """
    z = GElem.symbolic()
    r1, r2 = deformed_slice_residuals(z, spec, point.gamma, point.delta, point.epsilon)
    c, f = MPoly.var("c"), MPoly.var("f")
    sol = {"c": c - r2, "f": f - r1}
    f1, f2 = deformed_adjoint_quotient(z, point.alpha, point.beta)
    return (f1 - lam).subs(sol), (f2 - mu).subs(sol)


# -- growth of T^1 against deformations of slices ------------------------------


def _check_m(m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool):
        raise TypeError("m must be an integer")
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > BW_MAX_M:
        raise ValueError(f"m is capped at {BW_MAX_M}")


def bw_sequence(m: int) -> int:
    """``2^(m-1) (m^2 - m + 2) - 1``; cross-checked against the binomial sum."""
    _check_m(m)
    value = 2 ** (m - 1) * (m * m - m + 2) - 1
    if m <= 200 and value != bw_binomial_sum(m):
        raise ArithmeticError(f"closed form and binomial sum disagree at m = {m}")
    return value


def bw_binomial_sum(m: int) -> int:
    _check_m(m)
    return sum(comb(m + 2, i) * comb(i - 1, 2) for i in range(3, m + 3))


def aff_dimension(m: int) -> int:
    """Dimension of the variety of (m+2)-dimensional affine subspaces of sl(2)^m."""
    _check_m(m)
    value = (2 * m - 1) * (m + 2)
    if value != aff_dimension_grassmann(m):
        raise ArithmeticError("Grassmannian dimension mismatch")
    return value


def aff_dimension_grassmann(m: int) -> int:
    """``dim Grass(3m + 1, m + 2) = (m + 2)((3m + 1) - (m + 2))``."""
    _check_m(m)
    n, k = 3 * m + 1, m + 2
    return k * (n - k)
