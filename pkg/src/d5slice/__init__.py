"""Exact construction and classification of D5-tilde simple elliptic singularities.

The package works over the rationals throughout (``fractions.Fraction``)
and falls back to floating point only in :mod:`d5slice.numeric_oracle`.
"""

from d5slice.exact_algebra import MPoly, RatFunc, resultant, quartic_discriminant_oracle
from d5slice.matrix_core import Mat2, Mat4, char_poly4
from d5slice.pencil import Classification, SymPencil, classify, j_from_charpoly
from d5slice.good_slice import INF, GElem, GoodPairRaw, SliceSpec, j_closed_form, pencil_from_pq

__all__ = [
    "INF",
    "Classification",
    "GElem",
    "GoodPairRaw",
    "MPoly",
    "Mat2",
    "Mat4",
    "RatFunc",
    "SliceSpec",
    "SymPencil",
    "char_poly4",
    "classify",
    "j_closed_form",
    "j_from_charpoly",
    "pencil_from_pq",
    "quartic_discriminant_oracle",
    "resultant",
]

__version__ = "0.1.0"
