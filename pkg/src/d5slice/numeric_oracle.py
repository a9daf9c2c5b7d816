"""Floating-point oracles over C.

Everything here is a numeric shadow of an exact statement elsewhere in the
package: quartic roots feed the cross-ratio formula for j, orthogonal
diagonalisation realises symmetric similarity by orthogonal matrices, the
singular-locus probe looks for isotropic eigenvectors, and ``solve_j_target``
inverts the closed form ``j(t)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import sqrtm

__all__ = [
    "DEFAULT_SEP",
    "DEFAULT_TOL",
    "CoincidentEigenvaluesError",
    "EigenRecord",
    "JSolution",
    "NotDiagonalizableError",
    "PolishingError",
    "complex_from_json",
    "complex_to_json",
    "eigen_probe",
    "j_from_eigenvalues",
    "j_of_t_complex",
    "orthogonal_diagonalize",
    "polynomial_roots",
    "quartic_roots",
    "singular_locus_probe",
    "solve_j_target",
]

DEFAULT_TOL = 1e-8
DEFAULT_SEP = 1e-8
_J_SEXTIC = (1, -12, 51, -88, 51, -12, 1)


class PolishingError(ArithmeticError):
    """Newton polishing failed to bring a root within the residual bound."""


class CoincidentEigenvaluesError(ValueError):
    """Eigenvalues are closer than the separation threshold."""


class NotDiagonalizableError(ValueError):
    """A (near-)repeated eigenvalue lacks a full eigenspace."""


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    return {"re": float(z.real), "im": float(z.imag)}


def complex_from_json(data) -> complex:
    if isinstance(data, dict):
        return complex(float(data.get("re", 0.0)), float(data.get("im", 0.0)))
    if isinstance(data, (int, float, complex)):
        return complex(data)
    raise ValueError(f"not a complex number: {data!r}")


def _horner(coeffs: Sequence[complex], x: complex) -> tuple[complex, complex]:
    """Value and derivative at x; coefficients highest degree first."""
    val, der = 0j, 0j
    for c in coeffs:
        der = der * x + val
        val = val * x + c
    return val, der


def polynomial_roots(coeffs: Sequence[complex], tol: float = 1e-10,
                     max_iter: int = 60) -> list[complex]:
    """All roots of a polynomial (highest degree first, nonzero leading term).

    Companion-matrix eigenvalues followed by Newton polishing; a step is
    kept only if it lowers ``|P|``.  Each root must end with
    ``|P(r)| <= tol * (1 + max |coeff|) * max(1, |r|)^n`` for the monic
    normalisation of degree n; the last factor only matters for roots
    outside the unit disc, where the terms of P are that large.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.size < 2 or c[0] == 0:
        raise ValueError("need a nonzero leading coefficient and degree >= 1")
    c = c / c[0]
    n = c.size - 1
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -c[1:]
    companion[1:, :-1] = np.eye(n - 1)
    roots = np.linalg.eigvals(companion) if n > 1 else np.array([-c[1]])
    base = tol * (1 + float(np.max(np.abs(c))))
    out = []
    for r in roots:
        r = complex(r)
        val, der = _horner(c, r)
        for _ in range(max_iter):
            if abs(val) == 0 or der == 0:
                break
            cand = r - val / der
            cval, cder = _horner(c, cand)
            if abs(cval) >= abs(val):
                break
            r, val, der = cand, cval, cder
        bound = base * max(1.0, abs(r)) ** n
        if abs(val) > bound:
            raise PolishingError(f"root {r} has residual {abs(val):.3e} > {bound:.3e}")
        out.append(complex(r))
    return out


def quartic_roots(a, b, c, d, tol: float = 1e-10) -> list[complex]:
    """Roots of ``t^4 - a t^3 + b t^2 - c t + d``."""
    return polynomial_roots([1, -complex(a), complex(b), -complex(c), complex(d)], tol=tol)


def _check_separated(values: Sequence[complex], sep: float) -> None:
    scale = max(1.0, max(abs(v) for v in values))
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) < sep * scale:
                raise CoincidentEigenvaluesError(
                    f"eigenvalues {values[i]} and {values[j]} are not separated")


def j_from_eigenvalues(l0, l1, l2, l3, sep: float = DEFAULT_SEP) -> complex:
    """j from the cross-ratio parameters ``M, N`` of four distinct eigenvalues."""
    lam = [complex(x) for x in (l0, l1, l2, l3)]
    _check_separated(lam, sep)
    l0, l1, l2, l3 = lam
    m = (l1 - l3) / (l0 - l3)
    n = (l1 - l2) / (l0 - l2)
    return 2**8 * (n * n - m * n + m * m) ** 3 / (m * m * n * n * (n - m) ** 2)


def j_of_t_complex(t: complex) -> complex:
    t = complex(t)
    num = 256 * sum(c * t ** (6 - k) for k, c in enumerate(_J_SEXTIC))
    return num / (t**4 * (1 - 4 * t))


# -- eigen-structure of complex symmetric matrices ----------------------------


def _clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    order = sorted(range(len(values)), key=lambda i: (values[i].real, values[i].imag))
    groups: list[list[int]] = []
    for i in order:
        for g in groups:
            if any(abs(values[i] - values[k]) <= tol for k in g):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _eigenspaces(A: np.ndarray, sep: float, null_tol: float = 1e-9):
    """[(eigenvalue, algebraic multiplicity, eigenspace basis columns)] per cluster.

    Eigenvalues closer than ``sqrt(sep)`` (relative) form one cluster, which
    captures the splitting of a defective eigenvalue; its eigenspace comes from
    the SVD null space of ``A - alpha I``.
    """
    vals = np.linalg.eigvals(A)
    scale = max(1.0, float(np.max(np.abs(vals))), float(np.max(np.abs(A))))
    out = []
    for group in _clusters(vals, np.sqrt(sep) * scale):
        alpha = complex(np.mean(vals[group]))
        _, s, vh = np.linalg.svd(A - alpha * np.eye(A.shape[0]))
        nullity = int(np.sum(s <= null_tol * scale))
        nullity = max(nullity, 1)
        basis = vh[-nullity:].conj().T
        out.append((alpha, len(group), basis))
    return out


def orthogonal_diagonalize(X, sep: float = DEFAULT_SEP, tol: float = DEFAULT_TOL):
    """``Q`` with ``Q^T Q = I`` and ``Q^T X Q`` diagonal, for diagonalizable symmetric X.

    Builds an eigenvector matrix R, whose bilinear Gram matrix ``R^T R`` is
    block diagonal across distinct eigenvalues, then normalises each block
    ``B`` by ``T = B^(-1/2)`` so ``T^T B T = I``.
    """
    X = np.asarray(X, dtype=complex)
    if X.shape != (4, 4) or not np.allclose(X, X.T, atol=tol):
        raise ValueError("orthogonal_diagonalize needs a symmetric 4x4 matrix")
    blocks = _eigenspaces(X, sep)
    cols, alphas = [], []
    for alpha, mult, basis in blocks:
        if basis.shape[1] < mult:
            raise NotDiagonalizableError(
                f"eigenvalue {alpha} has multiplicity {mult} but a "
                f"{basis.shape[1]}-dimensional eigenspace")
        B = basis.T @ basis
        if basis.shape[1] == 1:
            if abs(B[0, 0]) <= tol:
                raise NotDiagonalizableError("isotropic eigenvector")
            T = np.array([[1 / cmath.sqrt(B[0, 0])]])
        else:
            T = np.linalg.inv(sqrtm(B))
        block = basis @ T
        for k in range(block.shape[1]):
            lead = block[np.argmax(np.abs(block[:, k])), k]
            if (lead.real, lead.imag) < (0, 0):
                block[:, k] = -block[:, k]
        cols.append(block)
        alphas.extend([alpha] * basis.shape[1])
    Q = np.hstack(cols)
    diag = np.array(alphas)
    res_orth = np.max(np.abs(Q.T @ Q - np.eye(4)))
    res_diag = np.max(np.abs(Q.T @ X @ Q - np.diag(diag)))
    if res_orth > tol or res_diag > tol * max(1.0, float(np.max(np.abs(X)))):
        raise NotDiagonalizableError(
            f"residuals too large (orthogonality {res_orth:.2e}, diagonal {res_diag:.2e})")
    return Q, diag


@dataclass(frozen=True)
class EigenRecord:
    alpha: complex
    v: np.ndarray = field(repr=False)
    vtv: complex


def eigen_probe(A, sep: float = DEFAULT_SEP) -> list[EigenRecord]:
    """Every computed eigen-direction with its bilinear square ``v^T v`` (``|v| = 1``).

    For a repeated eigenvalue only the computed basis directions are
    reported, not the whole eigenspace.
    """
    A = np.asarray(A, dtype=complex)
    out = []
    for alpha, _, basis in _eigenspaces(A, sep):
        for k in range(basis.shape[1]):
            v = basis[:, k] / np.linalg.norm(basis[:, k])
            out.append(EigenRecord(alpha, v, complex(v @ v)))
    return out


def singular_locus_probe(A, tol: float = DEFAULT_TOL, sep: float = DEFAULT_SEP):
    """Isotropic eigenvectors ``(v, alpha)`` of A: singular directions of ``S_(I4, A)``."""
    return [(r.v, r.alpha) for r in eigen_probe(A, sep) if abs(r.vtv) <= tol]


# -- inverting the closed-form j ------------------------------------------------


@dataclass(frozen=True)
class JSolution:
    target: complex
    roots: list[complex]
    filtered: list[complex]

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)


def j_sextic(j_target: complex) -> list[complex]:
    """Coefficients (highest first) of ``256 N(t) - j t^4 (1 - 4t)``."""
    c = [256 * complex(x) for x in _J_SEXTIC]
    c[1] += 4 * j_target
    c[2] -= j_target
    return c


def solve_j_target(j_target, tol: float = DEFAULT_TOL, exclusion: float = 1e-9) -> JSolution:
    """All t outside {0, 1/4} with ``j(t) = j_target``; any ``(p, q)`` with ``pq = t`` works."""
    j_target = complex(j_target)
    roots = polynomial_roots(j_sextic(j_target), tol=1e-10)
    keep, dropped = [], []
    for t in roots:
        if abs(t) <= exclusion or abs(t - 0.25) <= exclusion:
            dropped.append(t)
            continue
        err = abs(j_of_t_complex(t) - j_target)
        if err > tol * (1 + abs(j_target)):
            raise PolishingError(f"round trip error {err:.3e} at t = {t}")
        keep.append(t)
    return JSolution(j_target, keep, dropped)
