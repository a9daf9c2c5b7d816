import cmath
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import rand_frac, rand_sym4
from d5slice.good_slice import SliceSpec, j_closed_form
from d5slice.matrix_core import char_poly4
from d5slice.numeric_oracle import (
    CoincidentEigenvaluesError,
    NotDiagonalizableError,
    PolishingError,
    complex_from_json,
    complex_to_json,
    eigen_probe,
    j_from_eigenvalues,
    j_of_t_complex,
    orthogonal_diagonalize,
    polynomial_roots,
    quartic_roots,
    singular_locus_probe,
    solve_j_target,
)
from d5slice.pencil import j_from_charpoly, quartic_discriminant


def _close_multiset(got, expected, tol):
    got = sorted(got, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    expected = sorted(expected, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    return all(abs(g - x) <= tol for g, x in zip(got, expected))


def test_quartic_roots_examples():
    assert _close_multiset(quartic_roots(6, 11, 6, 0), [0, 1, 2, 3], 1e-10)
    assert _close_multiset(quartic_roots(0, 0, 0, 0), [0, 0, 0, 0], 1e-10)
    assert _close_multiset(quartic_roots(0, -2, 0, 1), [1, 1, -1, -1], 1e-8)


def test_quartic_root_residuals():
    rng = np.random.default_rng(1)
    for _ in range(50):
        coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
        roots = quartic_roots(*coeffs)
        a, b, c, d = coeffs
        bound = 1e-10 * (1 + max(1, *abs(coeffs)))
        for r in roots:
            assert abs(r**4 - a * r**3 + b * r**2 - c * r + d) <= bound * max(1, abs(r)) ** 4


def test_polynomial_roots_validation():
    with pytest.raises(ValueError):
        polynomial_roots([0, 1, 2])
    assert polynomial_roots([2, -4]) == [2]


def test_polishing_failure_reported():
    with pytest.raises(PolishingError):
        polynomial_roots([1, 0, 0, 0, -2], tol=1e-40)


def test_j_from_eigenvalues_examples():
    target = 35152 / 9
    assert abs(j_from_eigenvalues(0, 1, 2, 3) - target) <= 1e-10 * target
    assert abs(j_from_eigenvalues(-3, -1, 1, 3) - target) <= 1e-10 * target
    with pytest.raises(CoincidentEigenvaluesError):
        j_from_eigenvalues(0, 1, 1, 2)


def test_cross_pipeline_agreement():
    rng = random.Random(3)
    done = 0
    while done < 100:
        X = rand_sym4(rng)
        coeffs = char_poly4(X)
        if quartic_discriminant(*coeffs) == 0:
            continue
        exact = j_from_charpoly(*coeffs)
        numeric = j_from_eigenvalues(*quartic_roots(*(float(c) for c in coeffs)))
        assert abs(numeric - float(exact)) <= 1e-8 * max(1.0, abs(float(exact)))
        done += 1


finite = st.floats(min_value=-3, max_value=3, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(finite, min_size=4, max_size=4, unique=True),
       st.tuples(finite, finite, finite, finite))
def test_mobius_invariance(lams, uvwz):
    u, v, w, z = uvwz
    assume(abs(u * z - v * w) > 0.1)
    assume(min(abs(x - y) for i, x in enumerate(lams) for y in lams[i + 1:]) > 0.05)
    assume(all(abs(w * x + z) > 0.1 for x in lams))
    images = [(u * x + v) / (w * x + z) for x in lams]
    assume(min(abs(x - y) for i, x in enumerate(images) for y in images[i + 1:]) > 1e-3)
    assume(max(abs(x) for x in images) < 1e3)
    j0 = j_from_eigenvalues(*lams)
    j1 = j_from_eigenvalues(*images)
    assert abs(j1 - j0) <= 1e-8 * max(1.0, abs(j0))


def test_orthogonal_diagonalize_examples():
    Q, diag = orthogonal_diagonalize(np.diag([1.0, 2, 3, 4]))
    assert np.allclose(Q, np.eye(4)) and np.allclose(diag, [1, 2, 3, 4])
    X = np.zeros((4, 4))
    X[0, 1] = X[1, 0] = 1
    Q, diag = orthogonal_diagonalize(X)
    assert sorted(diag.real) == pytest.approx([-1, 0, 0, 1])
    s = 1 / np.sqrt(2)
    for col in (np.array([s, s, 0, 0]), np.array([s, -s, 0, 0])):
        assert any(np.allclose(Q[:, k], col) or np.allclose(Q[:, k], -col) for k in range(4))


def test_orthogonal_diagonalize_rejects_defective_double_eigenvalue():
    A = np.diag([1, -1, 2, 3]).astype(complex)
    A[0, 1] = A[1, 0] = 1j
    with pytest.raises(NotDiagonalizableError):
        orthogonal_diagonalize(A)


def test_orthogonal_diagonalize_random():
    rng = np.random.default_rng(4)
    done = 0
    while done < 100:
        X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        X = X + X.T
        ev = np.linalg.eigvals(X)
        if min(abs(x - y) for i, x in enumerate(ev) for y in ev[i + 1:]) < 1e-2:
            continue
        Q, diag = orthogonal_diagonalize(X)
        assert np.max(np.abs(Q.T @ Q - np.eye(4))) <= 1e-8
        assert np.max(np.abs(Q.T @ X @ Q - np.diag(diag))) <= 1e-8 * max(1, np.max(np.abs(X)))
        done += 1


def test_singular_locus_probe():
    assert singular_locus_probe(np.eye(4)) == []
    A = np.diag([1, -1, 2, 3]).astype(complex)
    A[0, 1] = A[1, 0] = 1j
    found = singular_locus_probe(A)
    assert len(found) == 1
    v, alpha = found[0]
    assert abs(v @ v) <= 1e-8
    assert np.allclose(A @ v, alpha * v)
    assert abs(alpha) <= 1e-8


def test_singular_locus_probe_from_nilpotent_block():
    # a complex symmetric matrix similar to a single nilpotent Jordan block;
    # its kernel is spanned by an isotropic vector
    J = np.zeros((4, 4), dtype=complex)
    J[0, 1] = J[1, 2] = J[2, 3] = 1
    U = (np.eye(4) + 1j * np.fliplr(np.eye(4))) / np.sqrt(2)
    S = U @ J @ np.linalg.inv(U)
    assert np.allclose(S, S.T)
    found = singular_locus_probe(S)
    assert found
    for v, alpha in found:
        assert abs(v @ v) <= 1e-8 and np.allclose(S @ v, alpha * v, atol=1e-8)


def test_probe_empty_for_squarefree():
    rng = random.Random(5)
    done = 0
    while done < 50:
        X = rand_sym4(rng)
        if quartic_discriminant(*char_poly4(X)) == 0:
            continue
        A = np.array([[float(v) for v in r] for r in X.rows], dtype=complex)
        assert singular_locus_probe(A) == []
        assert all(abs(r.vtv) > 1e-8 for r in eigen_probe(A))
        done += 1


@pytest.mark.parametrize("target,t0", [(55296 / 5, -1.0), (2048 / 3, 1.0)])
def test_solve_j_target_examples(target, t0):
    sol = solve_j_target(target)
    assert any(abs(t - t0) <= 1e-8 for t in sol.roots)


def test_solve_j_target_zero():
    sol = solve_j_target(0)
    assert len(sol.roots) == 6 and not sol.filtered
    assert all(abs(t) > 1e-3 and abs(t - 0.25) > 1e-3 for t in sol.roots)


def test_solve_j_round_trip():
    rng = random.Random(6)
    done = 0
    while done < 50:
        t = rand_frac(rng, 6, 7)
        if t == 0 or 4 * t == 1:
            continue
        j = j_closed_form(SliceSpec(t, 1))
        sol = solve_j_target(float(j))
        assert min(abs(r - float(t)) for r in sol.roots) <= 1e-8 * max(1, abs(float(t)))
        done += 1


def test_j_of_t_complex_matches_exact():
    for t in (Fraction(1), Fraction(-1), Fraction(2, 7)):
        assert abs(j_of_t_complex(float(t)) - float(j_closed_form(SliceSpec(t, 1)))) < 1e-8


def test_complex_json():
    z = 1.5 - 2j
    assert complex_to_json(z) == {"re": 1.5, "im": -2.0}
    assert complex_from_json(complex_to_json(z)) == z
    with pytest.raises(ValueError):
        complex_from_json("x")
    assert cmath.isclose(complex_from_json(3), 3)
