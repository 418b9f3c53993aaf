from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from gl2hecke.exact import exact_determinant, exact_rank
from gl2hecke.reference import factorize, format_factors, from_factors

small_ints = st.integers(-9, 9)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


def fraction_rank(rows):
    """Plain Gauss-Jordan over Q."""
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@given(st.integers(1, 6).flatmap(square))
def test_determinant_matches_sympy(rows):
    assert exact_determinant(np.array(rows)) == sympy.Matrix(rows).det()


@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_rank_matches_fraction_elimination(rows):
    assert exact_rank(np.array(rows)) == fraction_rank(rows)


def test_large_entries_stay_exact():
    m = np.array([[10**30, 1], [1, 10**30]], dtype=object)
    assert exact_determinant(m) == 10**60 - 1


def test_rejects_floats_and_non_square():
    with pytest.raises(TypeError):
        exact_determinant(np.array([[1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        exact_determinant(np.zeros((2, 3), dtype=np.int64))


def test_singular_and_empty():
    assert exact_determinant(np.array([[1, 2], [2, 4]])) == 0
    assert exact_determinant(np.zeros((0, 0), dtype=np.int64)) == 1
    assert exact_rank(np.zeros((3, 3), dtype=np.int64)) == 0


@given(st.integers(1, 10**12))
def test_factorize_round_trip(n):
    assert from_factors(factorize(n)) == n


def test_format_factors():
    assert format_factors({2: 20, 3: 9}) == "2^20 * 3^9"
    assert format_factors({}) == "1"
    assert format_factors({5: 1}) == "5"
