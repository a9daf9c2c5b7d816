"""Pencils of quadrics ``sX + tY`` in four variables.

Invariants of a pair of symmetric 4x4 matrices, the discriminant test for
isolated (D5-tilde) singularities, the j-invariant of the exceptional
elliptic curve, and the rational parts of congruence normal forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from d5slice.exact_algebra import format_rational
from d5slice.matrix_core import Mat4, char_poly4, rank

__all__ = [
    "Classification",
    "ELLIPTIC",
    "DEGENERATE",
    "IDENTICALLY_SINGULAR",
    "LOW_RANK",
    "MULTIPLE_ROOT",
    "MultipleRootError",
    "PreconditionError",
    "SymPencil",
    "classify",
    "congruence_diagonalize",
    "equivalent",
    "find_invertible_member",
    "find_nonisotropic_vector",
    "j_from_charpoly",
    "j_numerator",
    "j_of_pencil",
    "pencil_coeffs",
    "pencil_discriminant",
    "probe_pairs",
    "quartic_discriminant",
]

ELLIPTIC = "EllipticD5"
DEGENERATE = "Degenerate"
IDENTICALLY_SINGULAR = "IdenticallySingularPencil"
LOW_RANK = "LowRank"
MULTIPLE_ROOT = "MultipleRoot"


class MultipleRootError(ValueError):
    """The characteristic polynomial has a repeated root, so no elliptic curve exists."""


class PreconditionError(ValueError):
    """An operation's hypotheses (invertibility, squarefreeness) are not met."""


@dataclass(frozen=True)
class SymPencil:
    """The pencil spanned by two symmetric 4x4 matrices."""

    X: Mat4
    Y: Mat4

    def __post_init__(self):
        for name in ("X", "Y"):
            m = getattr(self, name)
            if not isinstance(m, Mat4):
                object.__setattr__(self, name, m := Mat4(m))
            if not m.is_symmetric():
                raise ValueError(f"pencil member {name} is not symmetric")

    def member(self, a, b) -> Mat4:
        return self.X.scale(a) + self.Y.scale(b)

    def to_json(self) -> dict:
        return {"X": self.X.to_json(), "Y": self.Y.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "SymPencil":
        if not isinstance(data, dict) or "X" not in data or "Y" not in data:
            raise ValueError('pencil JSON needs keys "X" and "Y"')
        return cls(Mat4.from_json(data["X"]), Mat4.from_json(data["Y"]))


@dataclass(frozen=True)
class Classification:
    verdict: str
    reason: Optional[str] = None
    j: Optional[Fraction] = None

    @property
    def is_elliptic(self) -> bool:
        return self.verdict == ELLIPTIC

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.j is not None:
            out["j"] = format_rational(self.j)
        return out


def _c2(m: Mat4):
    return char_poly4(m)[1]


def pencil_coeffs(pencil: SymPencil):
    """``(c40, c31, c22, c13, c04)`` with ``det(sX + tY) = sum c_ij s^i t^j``.

    Each coefficient comes from trace identities, not from expanding the
    determinant.
    """
    X, Y = pencil.X, pencil.Y
    _, c2x, c3x, _ = char_poly4(X)
    _, c2y, c3y, _ = char_poly4(Y)
    XY = X * Y
    XX = X * X
    YY = Y * Y
    trX, trY, trXY = X.trace(), Y.trace(), XY.trace()
    trXXY = (XX * Y).trace()
    trXYY = (X * YY).trace()

    c40 = X.det()
    c31 = c3x * trY - c2x * trXY + trXXY * trX - (XX * XY).trace()
    c22 = (c2x * c2y + _c2(XY) - (XX * YY).trace() + trXXY * trY
           + trXYY * trX - trXY * trX * trY)
    c13 = c3y * trX - c2y * trXY + trXYY * trY - (XY * YY).trace()
    c04 = Y.det()
    return c40, c31, c22, c13, c04


def quartic_discriminant(a, b, c, d):
    """Discriminant of the monic quartic ``t^4 - a t^3 + b t^2 - c t + d``."""
    return (-27 * a**4 * d**2 + 18 * a**3 * b * c * d - 4 * a**3 * c**3
            - 4 * a**2 * b**3 * d + a**2 * b**2 * c**2 + 144 * a**2 * b * d**2
            - 6 * a**2 * c**2 * d - 80 * a * b**2 * c * d + 18 * a * b * c**3
            + 16 * b**4 * d - 4 * b**3 * c**2 - 192 * a * c * d**2
            - 128 * b**2 * d**2 + 144 * b * c**2 * d - 27 * c**4 + 256 * d**3)


def pencil_discriminant(pencil: SymPencil):
    """Discriminant ``D(X, Y)`` of the binary quartic ``det(tX + Y)``."""
    dx, c31, c22, c13, dy = pencil_coeffs(pencil)
    return (256 * dx**3 * dy**3 - 27 * dx**2 * c13**4 - 27 * dy**2 * c31**4
            - 4 * c31**3 * c13**3 - 128 * dx**2 * dy**2 * c22**2
            + 16 * dx * dy * c22**4 - 80 * dx * dy * c31 * c22**2 * c13
            - 4 * dx * c22**3 * c13**2 - 4 * dy * c31**2 * c22**3
            + 18 * dy * c31**3 * c22 * c13
            + 18 * dx * c31 * c22 * c13**3
            + 144 * dx * dy**2 * c31**2 * c22
            + 144 * dx**2 * dy * c22 * c13**2
            + c31**2 * c22**2 * c13**2 - 6 * dx * dy * c31**2 * c13**2
            - 192 * dx**2 * dy**2 * c31 * c13)


def j_numerator(a, b, c, d):
    """Numerator of the j-invariant in terms of the characteristic coefficients."""
    return 2**8 * (1728 * d**3 - 1296 * a * c * d**2 + 432 * b**2 * d**2
                   + 324 * a**2 * c**2 * d - 216 * a * b**2 * c * d
                   + 36 * b**4 * d - 27 * a**3 * c**3 + 27 * a**2 * b**2 * c**2
                   - 9 * a * b**4 * c + b**6)


def j_from_charpoly(a, b, c, d):
    """j-invariant of the elliptic curve cut out by ``(I4, A)`` where
    ``t^4 - a t^3 + b t^2 - c t + d`` is the characteristic polynomial of A.

    >>> j_from_charpoly(6, 11, 6, 0)
    Fraction(35152, 9)
    """
    a, b, c, d = (Fraction(x) if isinstance(x, int) else x for x in (a, b, c, d))
    disc = quartic_discriminant(a, b, c, d)
    if disc == 0:
        raise MultipleRootError("characteristic polynomial has a multiple root")
    return j_numerator(a, b, c, d) / disc


def probe_pairs() -> Iterator[tuple[int, int]]:
    """(1,0), (0,1), (1,1), (1,-1), (1,2), (1,-2), ... -- pairwise projectively distinct."""
    yield (1, 0)
    yield (0, 1)
    k = 1
    while True:
        yield (1, k)
        yield (1, -k)
        k += 1


def find_invertible_member(pencil: SymPencil, max_probes: int = 9):
    """Return ``((a, b), (c, d))`` with ``aX + bY`` invertible and ``ad - bc != 0``.

    Returns None when no probe gives an invertible member; since a nonzero
    binary quartic has at most four projective roots, that only happens for
    an identically singular pencil.
    """
    for k, (a, b) in enumerate(probe_pairs()):
        if k >= max_probes:
            return None
        if pencil.member(a, b).det() != 0:
            break
    for c, d in probe_pairs():
        if a * d - b * c != 0:
            return (a, b), (c, d)
    raise AssertionError("unreachable")


def j_of_pencil(pencil: SymPencil, ab=None, cd=None):
    """j computed from ``(aX + bY)^-1 (cX + dY)``; defaults to the probe choice."""
    if ab is None or cd is None:
        found = find_invertible_member(pencil)
        if found is None:
            raise PreconditionError("pencil is identically singular")
        ab, cd = found
    a, b = ab
    c, d = cd
    if a * d - b * c == 0:
        raise PreconditionError("(a, b; c, d) is not invertible")
    m = pencil.member(a, b).inverse() * pencil.member(c, d)
    return j_from_charpoly(*char_poly4(m))


def classify(pencil: SymPencil) -> Classification:
    """Decide whether ``S_(X,Y)`` is a D5-tilde singularity; attach j when it is.

    Degenerate pencils get a diagnostic reason: ``LowRank`` when X or Y has
    rank at most 2, ``IdenticallySingularPencil`` when ``det(sX + tY)``
    vanishes identically, ``MultipleRoot`` otherwise.
    """
    disc = pencil_discriminant(pencil)
    if disc != 0:
        return Classification(ELLIPTIC, j=j_of_pencil(pencil))
    if rank(pencil.X.rows) <= 2 or rank(pencil.Y.rows) <= 2:
        return Classification(DEGENERATE, reason=LOW_RANK)
    if all(c == 0 for c in pencil_coeffs(pencil)):
        return Classification(DEGENERATE, reason=IDENTICALLY_SINGULAR)
    return Classification(DEGENERATE, reason=MULTIPLE_ROOT)


def equivalent(p1: SymPencil, p2: SymPencil) -> bool:
    """Congruence test for pencils whose ``X^-1 Y`` has distinct eigenvalues.

    Distinct eigenvalues make ``X^-1 Y`` diagonalizable, and then two such
    pencils are congruent exactly when the characteristic polynomials agree.
    """
    for name, p in (("first", p1), ("second", p2)):
        if p.X.det() == 0:
            raise PreconditionError(f"X of the {name} pencil is singular")
    cp1 = char_poly4(p1.X.inverse() * p1.Y)
    if quartic_discriminant(*cp1) == 0:
        raise PreconditionError("X^-1 Y has a repeated eigenvalue; diagonalizability unverified")
    cp2 = char_poly4(p2.X.inverse() * p2.Y)
    return tuple(cp1) == tuple(cp2)


def _unit(i: int) -> list[Fraction]:
    v = [Fraction(0)] * 4
    v[i] = Fraction(1)
    return v


def find_nonisotropic_vector(X: Mat4) -> tuple[list[Fraction], Fraction]:
    """A vector ``v`` with ``r = v^T X v != 0``.

    Tries the coordinate vectors first; if every diagonal entry vanishes,
    some off-diagonal ``X_ij`` does not and ``e_i + e_j`` has value ``2 X_ij``.
    """
    for i in range(4):
        if X[i, i] != 0:
            return _unit(i), X[i, i]
    for i in range(4):
        for j in range(i + 1, 4):
            if X[i, j] != 0:
                v = [a + b for a, b in zip(_unit(i), _unit(j))]
                return v, X.quadratic_form(v)
    raise ValueError("the zero form has no nonisotropic vector")


def _bilinear(X: Mat4, v, w):
    xw = X.apply(w)
    return sum((a * b for a, b in zip(v, xw)), Fraction(0))


def _primitive(v: list[Fraction]) -> list[Fraction]:
    from math import gcd, lcm

    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    if g == 0:
        return v
    lead = next(x for x in ints if x)
    g = g if lead > 0 else -g
    return [Fraction(x, g) for x in ints]


def congruence_diagonalize(X: Mat4) -> tuple[Mat4, tuple[Fraction, ...], int]:
    """Rational congruence ``P^T X P = diag(d)`` with nonzero ``d_i`` exactly for ``i < rank``.

    Each step picks a nonisotropic vector in the orthogonal complement of the
    previous ones and projects it out of the remaining basis.  The columns of
    P are rescaled to primitive integer vectors.
    """
    if not X.is_symmetric():
        raise ValueError("congruence_diagonalize needs a symmetric matrix")
    basis = [_unit(i) for i in range(4)]
    r = 0
    while r < 4:
        rest = basis[r:]
        gram = [[_bilinear(X, u, w) for w in rest] for u in rest]
        k = next((i for i in range(len(rest)) if gram[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(len(rest)) for j in range(i + 1, len(rest))
                         if gram[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            rest[i] = [a + b for a, b in zip(rest[i], rest[j])]
            k = i
        rest[0], rest[k] = rest[k], rest[0]
        pivot = rest[0]
        value = _bilinear(X, pivot, pivot)
        for i in range(1, len(rest)):
            coeff = _bilinear(X, pivot, rest[i]) / value
            rest[i] = [a - coeff * b for a, b in zip(rest[i], pivot)]
        basis[r:] = rest
        r += 1
    basis = [_primitive(v) for v in basis]
    P = Mat4([list(col) for col in zip(*basis)])
    diag = tuple(_bilinear(X, v, v) for v in basis)
    return P, diag, r
