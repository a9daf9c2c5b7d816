"""Exact rationals, multivariate polynomials, rational functions and resultants.

Scalars are :class:`fractions.Fraction`.  An :class:`MPoly` is a sparse map
from exponent vectors to nonzero rational coefficients over a sorted tuple of
variable names; every value is canonical, so equality of polynomials is
equality of term maps.  Polynomials with different variable lists are
embedded into the union of both lists before any binary operation.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "GLOBAL_ORDER",
    "MPoly",
    "MissingAssignmentError",
    "NotDivisibleError",
    "RatFunc",
    "Scalar",
    "bareiss_det",
    "format_rational",
    "parse_rational",
    "quartic_discriminant_oracle",
    "resultant",
    "sylvester_matrix",
]

Scalar = Union[int, Fraction]

#: Variables sort by this order first, then alphabetically.
GLOBAL_ORDER = ("p", "q", "s", "t", "a", "b", "d", "e", "c", "f")

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


class MissingAssignmentError(ValueError):
    """Raised when evaluating a polynomial without a value for one of its variables."""


class NotDivisibleError(ArithmeticError):
    """Raised by :meth:`MPoly.divide_exact` when the division leaves a remainder."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"num/den"``, ``"num"`` or a finite decimal into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if _RATIONAL_RE.match(s):
        return Fraction(s.replace(" ", ""))
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
    return value


def format_rational(x: Scalar) -> str:
    """Canonical string form: ``"num/den"`` or ``"num"`` when den = 1."""
    return str(Fraction(x))


def _var_key(name: str) -> tuple[int, int, str]:
    if name in GLOBAL_ORDER:
        return (0, GLOBAL_ORDER.index(name), name)
    return (1, 0, name)


def _sorted_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_var_key))


class MPoly:
    """Multivariate polynomial with rational coefficients.

    >>> x, y = MPoly.var("x"), MPoly.var("y")
    >>> (x + y) * (x - y) == x**2 - y**2
    True
    """

    __slots__ = ("_vars", "_terms")

    def __init__(self, terms: Mapping[Sequence[int], Scalar] | None = None,
                 variables: Sequence[str] = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        order = _sorted_vars(variables)
        perm = [variables.index(v) for v in order]
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise ValueError("exponent vector length does not match variable list")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            coeff = Fraction(coeff)
            if coeff:
                key = tuple(exps[i] for i in perm)
                total = clean.get(key, 0) + coeff
                if total:
                    clean[key] = total
                else:
                    clean.pop(key, None)
        self._vars = order
        self._terms = clean

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "MPoly":
        obj = cls.__new__(cls)
        obj._vars = variables
        obj._terms = terms
        return obj

    @classmethod
    def var(cls, name: str) -> "MPoly":
        return cls._raw((name,), {(1,): Fraction(1)})

    @classmethod
    def const(cls, value: Scalar, variables: Sequence[str] = ()) -> "MPoly":
        variables = _sorted_vars(variables)
        value = Fraction(value)
        terms = {(0,) * len(variables): value} if value else {}
        return cls._raw(variables, terms)

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "MPoly":
        return cls._raw(_sorted_vars(variables), {})

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    # -- structure --------------------------------------------------------

    def embed(self, variables: Iterable[str]) -> "MPoly":
        """Re-express over a larger variable list (in global order)."""
        target = _sorted_vars(list(variables) + list(self._vars))
        if target == self._vars:
            return self
        idx = [target.index(v) for v in self._vars]
        terms = {}
        for exps, c in self._terms.items():
            full = [0] * len(target)
            for i, e in zip(idx, exps):
                full[i] = e
            terms[tuple(full)] = c
        return MPoly._raw(target, terms)

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for exps in self._terms:
            used.update(v for v, e in zip(self._vars, exps) if e)
        return _sorted_vars(used)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, name: str) -> int:
        if name not in self._vars:
            return 0 if self._terms else -1
        i = self._vars.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def coefficients_in(self, name: str) -> list["MPoly"]:
        """Coefficients of ``self`` viewed as a polynomial in ``name``, lowest power first."""
        rest = tuple(v for v in self._vars if v != name)
        if name not in self._vars:
            return [MPoly._raw(rest, dict(self._terms))]
        i = self._vars.index(name)
        buckets: dict[int, dict] = {}
        for exps, c in self._terms.items():
            key = exps[:i] + exps[i + 1:]
            buckets.setdefault(exps[i], {})[key] = c
        deg = max(buckets, default=0)
        return [MPoly._raw(rest, buckets.get(k, {})) for k in range(deg + 1)]

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        """Lex-leading (exponents, coeff) pair with respect to the variable order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self._terms)
        return exps, self._terms[exps]

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "MPoly | None":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.const(other)
        return None

    def _align(self, other: "MPoly"):
        if self._vars == other._vars:
            return self._vars, self._terms, other._terms
        target = _sorted_vars(self._vars + other._vars)
        return target, self.embed(target)._terms, other.embed(target)._terms

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        variables, a, b = self._align(o)
        out = dict(a)
        for k, v in b.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MPoly._raw(variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self._vars, {k: -v for k, v in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return MPoly._raw(self._vars, {})
            return MPoly._raw(self._vars, {k: v * c for k, v in self._terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        variables, a, b = self._align(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0) + va * vb
        return MPoly._raw(variables, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("MPoly powers must be nonnegative integers")
        result = MPoly.const(1, self._vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division of MPoly by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, MPoly):
            if other.is_zero():
                raise ZeroDivisionError("division of MPoly by the zero polynomial")
            if other.is_constant():
                return self * (1 / other.constant_value())
            return RatFunc(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def divide_exact(self, divisor: "MPoly | Scalar") -> "MPoly":
        """Quotient of an exact division; raises NotDivisibleError otherwise."""
        d = self._coerce(divisor)
        if d is None:
            raise TypeError(f"cannot divide MPoly by {type(divisor).__name__}")
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if d.is_constant():
            return self * (1 / d.constant_value())
        variables, r_terms, d_terms = self._align(d)
        d_al = MPoly._raw(variables, d_terms)
        d_lead, d_coeff = d_al.leading_term()
        rem = MPoly._raw(variables, dict(r_terms))
        quot: dict[tuple[int, ...], Fraction] = {}
        while not rem.is_zero():
            r_lead, r_coeff = rem.leading_term()
            shift = tuple(x - y for x, y in zip(r_lead, d_lead))
            if any(s < 0 for s in shift):
                raise NotDivisibleError("division leaves a nonzero remainder")
            c = r_coeff / d_coeff
            quot[shift] = quot.get(shift, 0) + c
            rem = rem - MPoly._raw(variables, {shift: c}) * d_al
        return MPoly._raw(variables, {k: v for k, v in quot.items() if v})

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        _, a, b = self._align(o)
        return a == b

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        sparse = frozenset(
            (tuple((v, e) for v, e in zip(self._vars, exps) if e), c)
            for exps, c in self._terms.items()
        )
        return hash(sparse)

    def __bool__(self):
        return bool(self._terms)

    # -- calculus and evaluation -----------------------------------------

    def diff(self, name: str) -> "MPoly":
        if name not in self._vars:
            return MPoly._raw(self._vars, {})
        i = self._vars.index(name)
        out = {}
        for exps, c in self._terms.items():
            if exps[i]:
                new = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
                out[new] = c * exps[i]
        return MPoly._raw(self._vars, out)

    def subs(self, assignment: Mapping[str, "MPoly | Scalar"]) -> "MPoly":
        """Substitute scalars or polynomials for some of the variables."""
        keep = [i for i, v in enumerate(self._vars) if v not in assignment]
        keep_vars = tuple(self._vars[i] for i in keep)
        result = MPoly.zero(keep_vars)
        powers: dict[tuple[str, int], MPoly] = {}

        def power(name: str, k: int) -> MPoly:
            key = (name, k)
            if key not in powers:
                value = assignment[name]
                value = value if isinstance(value, MPoly) else MPoly.const(value)
                powers[key] = value ** k
            return powers[key]

        for exps, c in self._terms.items():
            term = MPoly._raw(keep_vars, {tuple(exps[i] for i in keep): c})
            for i, v in enumerate(self._vars):
                if v in assignment and exps[i]:
                    term = term * power(v, exps[i])
            result = result + term
        return result

    def eval(self, assignment: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.used_variables() if v not in assignment]
        if missing:
            raise MissingAssignmentError(f"no value assigned to {', '.join(missing)}")
        values = [Fraction(assignment[v]) if v in assignment else Fraction(0) for v in self._vars]
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(values, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    # -- output -----------------------------------------------------------

    def to_json(self, variables: Sequence[str] | None = None) -> list[dict]:
        """Terms as ``[{"exponents": [...], "coeff": "num/den"}]`` in descending order."""
        poly = self if variables is None else self.embed(variables)
        if variables is not None and tuple(_sorted_vars(variables)) != poly._vars:
            raise ValueError(f"polynomial uses variables outside {tuple(variables)}")
        return [
            {"exponents": list(exps), "coeff": format_rational(c)}
            for exps, c in sorted(poly._terms.items(), reverse=True)
        ]

    @classmethod
    def from_json(cls, terms: Iterable[Mapping], variables: Sequence[str]) -> "MPoly":
        data: dict[tuple[int, ...], Fraction] = {}
        for term in terms:
            key = tuple(int(e) for e in term["exponents"])
            data[key] = data.get(key, 0) + parse_rational(term["coeff"])
        return cls(data, variables)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self._vars, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"MPoly({self})"


def _as_mpoly(x) -> MPoly:
    if isinstance(x, MPoly):
        return x
    return MPoly.const(x)


class RatFunc:
    """Formal quotient ``num / den`` of two polynomials.

    No gcd normalisation is attempted; equality is decided by
    cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly | Scalar, den: MPoly | Scalar = 1):
        num, den = _as_mpoly(num), _as_mpoly(den)
        if den.is_zero():
            raise ZeroDivisionError("RatFunc with zero denominator")
        if den.is_constant():
            num = num * (1 / den.constant_value())
            den = MPoly.const(1)
        elif num.is_zero():
            den = MPoly.const(1)
        self.num = num
        self.den = den

    @staticmethod
    def _coerce(other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly) or (
            isinstance(other, (int, Fraction)) and not isinstance(other, bool)
        ):
            return RatFunc(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    __hash__ = None  # equality is not decided by a canonical form

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def reduced(self) -> "RatFunc":
        """Drop the denominator when it divides the numerator exactly."""
        if self.den.is_constant():
            return self
        try:
            return RatFunc(self.num.divide_exact(self.den))
        except NotDivisibleError:
            return self

    def as_poly(self) -> MPoly:
        r = self.reduced()
        if not r.den.is_constant():
            raise NotDivisibleError("rational function is not a polynomial")
        return r.num

    def subs(self, assignment) -> "RatFunc":
        return RatFunc(self.num.subs(assignment), self.den.subs(assignment))

    def eval(self, assignment: Mapping[str, Scalar]) -> Fraction:
        den = self.den.eval(assignment)
        if not den:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.eval(assignment) / den

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


# -- determinants and resultants ------------------------------------------


def _exact_div(a, b):
    if isinstance(a, MPoly) or isinstance(b, MPoly):
        return _as_mpoly(a).divide_exact(b)
    return Fraction(a) / Fraction(b)


def bareiss_det(rows: Sequence[Sequence]):
    """Fraction-free (Bareiss) determinant over Fraction or MPoly entries."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValueError("bareiss_det needs a square matrix")
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def sylvester_matrix(p: Sequence, q: Sequence) -> list[list]:
    """Sylvester matrix of two coefficient lists given highest degree first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    zero = Fraction(0)
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(p) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(q) + [zero] * (size - n - 1 - i))
    return rows


def _univariate_coeffs(f: MPoly, var: str) -> list:
    coeffs = f.coefficients_in(var)
    out = []
    for c in reversed(coeffs):
        out.append(c.constant_value() if c.is_constant() else c)
    return out


def resultant(p: MPoly, q: MPoly, var: str | None = None):
    """Resultant of ``p`` and ``q`` with respect to ``var``.

    Coefficients may involve other variables; the result then lies in the
    polynomial ring of those variables.  Computed as the Bareiss determinant
    of the Sylvester matrix.
    """
    p, q = _as_mpoly(p), _as_mpoly(q)
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined")
    if var is None:
        used = _sorted_vars(p.used_variables() + q.used_variables())
        if len(used) != 1:
            raise ValueError(f"cannot infer the main variable from {used}")
        var = used[0]
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise ValueError("resultant needs both polynomials of degree >= 1")
    return bareiss_det(sylvester_matrix(_univariate_coeffs(p, var), _univariate_coeffs(q, var)))


def quartic_discriminant_oracle(a, b, c, d):
    """Discriminant of ``t^4 - a t^3 + b t^2 - c t + d`` as ``Res(P, P')``.

    For a monic quartic the sign factor ``(-1)^(n(n-1)/2)`` is ``+1``.
    """
    t = MPoly.var("lambda_")
    poly = t**4 - a * t**3 + b * t**2 - c * t + d
    return resultant(poly, poly.diff("lambda_"), "lambda_")
