import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from d5slice.matrix_core import Mat4

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def rand_frac(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, max_den))


def rand_nonzero(rng: random.Random, bound: int = 5, max_den: int = 4) -> Fraction:
    while True:
        x = rand_frac(rng, bound, max_den)
        if x:
            return x


def rand_mat4(rng: random.Random, bound: int = 4) -> Mat4:
    return Mat4([[rand_frac(rng, bound) for _ in range(4)] for _ in range(4)])


def rand_sym4(rng: random.Random, bound: int = 4) -> Mat4:
    m = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            m[i][j] = m[j][i] = rand_frac(rng, bound)
    return Mat4(m)


@pytest.fixture
def rng():
    return random.Random(20240611)


_CRITERIA: dict[str, str] = {}


def record_criterion(key: str, ok: bool, detail: str) -> None:
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}"
    _CRITERIA[key] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: int(k)):
        terminalreporter.write_line(_CRITERIA[key])
