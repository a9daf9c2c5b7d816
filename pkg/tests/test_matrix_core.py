import random
from fractions import Fraction

import pytest
import sympy

from conftest import rand_mat4
from d5slice.exact_algebra import MPoly, RatFunc
from d5slice.matrix_core import Mat2, Mat4, SingularMatrixError, char_poly4, char_poly4_by_det, rank


def test_det_examples():
    assert Mat4.identity().det() == 1
    assert Mat4.diag(1, 2, 3, 4).det() == 24
    assert Mat4.identity().adjugate() == Mat4.identity()
    assert Mat2([[1, 2], [3, 4]]).det() == -2


def test_char_poly_examples():
    assert char_poly4(Mat4.identity()) == (4, 6, 4, 1)
    assert char_poly4(Mat4.diag(0, 1, 2, 3)) == (6, 11, 6, 0)
    assert char_poly4(Mat4.zero()) == (0, 0, 0, 0)


def test_trace_zero_and_symmetric_flags():
    assert Mat2([[1, 5], [2, -1]]).is_trace_zero()
    assert not Mat4([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]).is_symmetric()


def test_adjugate_identity_and_inverse():
    rng = random.Random(1)
    for _ in range(30):
        a = rand_mat4(rng)
        assert a * a.adjugate() == Mat4.identity().scale(a.det())
        if a.det() != 0:
            assert a * a.inverse() == Mat4.identity()


def test_inverse_of_singular_rejected():
    with pytest.raises(SingularMatrixError):
        Mat4.diag(1, 1, 0, 1).inverse()


def test_symbolic_inverse_has_ratfunc_entries():
    s = MPoly.var("s")
    a = Mat4.diag(s, 1, 1, 1) + Mat4([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    inv = a.inverse()
    assert isinstance(inv[0, 0], RatFunc)
    prod = a.map(RatFunc) * inv
    assert prod == Mat4.identity().map(RatFunc)


def test_cayley_hamilton():
    rng = random.Random(2)
    for _ in range(100):
        a = rand_mat4(rng)
        c1, c2, c3, c4 = char_poly4(a)
        a2 = a * a
        a3 = a2 * a
        lhs = a3 * a - a3.scale(c1) + a2.scale(c2) - a.scale(c3) + Mat4.identity().scale(c4)
        assert lhs == Mat4.zero()


def test_char_poly_matches_direct_expansion():
    rng = random.Random(3)
    for _ in range(100):
        a = rand_mat4(rng)
        c1, c2, c3, c4 = char_poly4(a)
        for tv in (Fraction(-2), Fraction(0), Fraction(1, 3), Fraction(5, 2), Fraction(7)):
            expected = tv**4 - c1 * tv**3 + c2 * tv**2 - c3 * tv + c4
            assert char_poly4_by_det(a, tv) == expected


def test_char_poly_against_sympy():
    rng = random.Random(4)
    lam = sympy.Symbol("lam")
    for _ in range(10):
        a = rand_mat4(rng)
        m = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in a.rows])
        coeffs = m.charpoly(lam).all_coeffs()
        c1, c2, c3, c4 = char_poly4(a)
        assert [coeffs[1], coeffs[2], coeffs[3], coeffs[4]] == [
            -sympy.Rational(c1.numerator, c1.denominator),
            sympy.Rational(c2.numerator, c2.denominator),
            -sympy.Rational(c3.numerator, c3.denominator),
            sympy.Rational(c4.numerator, c4.denominator)]


def test_det_multiplicative():
    rng = random.Random(5)
    for _ in range(50):
        a, b = rand_mat4(rng), rand_mat4(rng)
        assert (a * b).det() == a.det() * b.det()


def test_rank():
    assert rank(Mat4.identity().rows) == 4
    assert rank(Mat4.diag(1, 1, 0, 0).rows) == 2
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank(Mat4.zero().rows) == 0


def test_json_round_trip():
    a = Mat4([[Fraction(1, 2), 0, 0, 0], [0, -3, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    data = a.to_json()
    assert data[0][0] == "1/2" and data[1][1] == "-3"
    assert Mat4.from_json(data) == a
    with pytest.raises(ValueError):
        Mat4.from_json([["1"]])


def test_polynomial_entries():
    p = MPoly.var("p")
    a = Mat2([[p, 1], [0, p]])
    assert a.det() == p**2
    assert a.eval({"p": 3}) == Mat2([[3, 1], [0, 3]])
