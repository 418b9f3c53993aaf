import cmath
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from gl2hecke.characters import (
    MultiplicativeCharacter,
    make_character,
    nonsplit_components,
    steinberg_character,
    trivial_character,
)
from gl2hecke.eigen import (
    Table2Error,
    brute_force_sigma_census,
    charsum_eigenvalues,
    determinant_total,
    exact_component_determinants,
    exactness_hypotheses_check,
    lambda_NN_prime,
    lambda_sigma,
    lambda_sigma_direct,
    legendre_sum,
    matrix_eigenvalue,
    matrix_eigenvalues,
    nonvanishing_check,
    position_eigenvalues,
    round_exact,
    sigma_census_formula,
    soto_andrade_sum,
    table2_row,
    trace_pair_operator,
    v_mixed_eigen,
)
from gl2hecke.field import build_context, legendre
from gl2hecke.group import conjugacy_classes
from gl2hecke.operators import compose, epsilon_nonsplit, pair_operator
from gl2hecke.reference import REFERENCE_DETERMINANTS, from_factors


def spectrum(op) -> Counter:
    """Dense eigenvalues rounded to integers with multiplicities (oracle)."""
    ev = np.linalg.eigvals(op.matrix.astype(float))
    assert np.allclose(ev.imag, 0, atol=1e-6)
    return Counter(int(round(v)) for v in ev.real)


def primitive_root(p):
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // r, p) != 1
                                                for r in range(2, p) if (p - 1) % r == 0))


def naive_legendre_eigen(p, j):
    """(1/2) sum_d alpha_j(d) ((1+d^2)/p) with alpha_j(g^k) = exp(2 pi i jk/(p-1))."""
    g = primitive_root(p)
    total = 0
    for k in range(p - 1):
        d = pow(g, k, p)
        total += cmath.exp(2j * cmath.pi * j * k / (p - 1)) * legendre(1 + d * d, p)
    return total / 2


def test_sigma_census_formula_matches_enumeration(small_ctx):
    brute = brute_force_sigma_census(small_ctx)
    formula = sigma_census_formula(small_ctx)
    for c, n in zip(conjugacy_classes(small_ctx), formula):
        assert brute.get(c, 0) == n
    assert sum(formula) == 2 * (small_ctx.p - 1) ** 2


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_lambda_sigma_direct_two_censuses(p):
    ctx = build_context(p)
    for chi in nonsplit_components(ctx):
        a = lambda_sigma_direct(ctx, chi, census="formula")
        b = lambda_sigma_direct(ctx, chi, census="enumerate")
        assert abs(complex(a) - complex(b)) < 1e-9


def test_lambda_sigma_closed_forms_agree_with_direct(ctx):
    for chi in nonsplit_components(ctx):
        if chi == trivial_character(ctx.p):
            continue
        closed = lambda_sigma(ctx, chi).value
        direct = lambda_sigma_direct(ctx, chi)
        assert abs(complex(closed) - complex(direct)) < 1e-9


def test_legendre_sum_at_seven():
    ctx = build_context(7)
    (w,) = [c for c in nonsplit_components(ctx) if c.kind == "W"]
    j = w.params[0]
    val = legendre_sum(ctx, MultiplicativeCharacter(6, j))
    assert abs(val - naive_legendre_eigen(7, j)) < 1e-12
    assert abs(val.real**2 - 4) < 1e-9  # lambda_sigma = +-2, so lambda = 7 - 4 = 3
    assert lambda_NN_prime(ctx, w).value == pytest.approx(3)
    assert table2_row(ctx, with_total=False).det_W == 3**8


def test_legendre_sum_rejects_unselected():
    ctx = build_context(7)
    with pytest.raises(ValueError):
        legendre_sum(ctx, MultiplicativeCharacter(6, 3))


def test_soto_andrade_at_three():
    ctx = build_context(3)
    (x,) = [c for c in nonsplit_components(ctx) if c.kind == "X"]
    s = soto_andrade_sum(ctx, MultiplicativeCharacter(8, x.params[0]))
    assert abs(s.imag) < 1e-12
    assert round_exact(3 - s * s) ** 2 == 4
    with pytest.raises(ValueError):
        soto_andrade_sum(ctx, MultiplicativeCharacter(8, 1))


@pytest.mark.parametrize("p", [5, 7])
def test_soto_andrade_matches_matrix(p):
    ctx = build_context(p)
    op = epsilon_nonsplit(ctx)
    for chi in nonsplit_components(ctx):
        if chi.kind == "X":
            assert abs(complex(lambda_NN_prime(ctx, chi).value) - complex(matrix_eigenvalue(op, chi))) < 1e-9


@pytest.mark.parametrize("p, det_v", [(5, 2**10), (13, 2**26)])
def test_v_mixed(p, det_v):
    ctx = build_context(p)
    lam = p - v_mixed_eigen(ctx) ** 2
    assert lam.denominator == 1
    assert abs(int(lam)) ** p == det_v


def test_v_mixed_needs_one_mod_four():
    with pytest.raises(ValueError):
        v_mixed_eigen(build_context(7))


@pytest.mark.parametrize("p, want", [(7, 12), (19, 90)])
def test_trivial_eigenvalue_nn_prime(p, want):
    ctx = build_context(p)
    assert lambda_NN_prime(ctx, trivial_character(p)).value == want


def test_lambda_nn_prime_rejects_non_component():
    ctx = build_context(5)
    with pytest.raises(ValueError):
        lambda_NN_prime(ctx, steinberg_character(5))


def test_trace_formula_is_symmetric(small_ctx):
    """lambda_chi(HK x KH) on C[G/H] equals lambda_chi(KH x HK) on C[G/K] for shared chi."""
    for H, K in (("N", "N'"), ("B", "N"), ("G", "B")):
        for chi in nonsplit_components(small_ctx) + [steinberg_character(small_ctx.p)]:
            a = trace_pair_operator(small_ctx, chi, H, K)
            b = trace_pair_operator(small_ctx, chi, K, H)
            if a and b:
                assert abs(complex(a) - complex(b)) < 1e-9


def test_closed_form_eigenvalues(small_ctx):
    p = small_ctx.p
    U1 = trivial_character(p)
    assert trace_pair_operator(small_ctx, U1, "G", "B") == p + 1
    assert trace_pair_operator(small_ctx, U1, "B", "N") == 2 * p
    assert trace_pair_operator(small_ctx, U1, "N", "N'") == Fraction(p * p - 1, 4)


def test_steinberg_eigenvalue_of_bn_nb(small_ctx):
    """V1 on BN x NB is p - 1 (three independent computations)."""
    p = small_ctx.p
    V1 = steinberg_character(p)
    op = compose(pair_operator(small_ctx, "B", "N"), pair_operator(small_ctx, "N", "B"))
    assert trace_pair_operator(small_ctx, V1, "B", "N") == p - 1
    assert matrix_eigenvalue(op, V1) == p - 1
    assert spectrum(op) == Counter({2 * p: 1, p - 1: p})


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_nonsplit_spectrum_matches_charsum(p):
    ctx = build_context(p)
    op = epsilon_nonsplit(ctx)
    dense = np.sort_complex(np.linalg.eigvals(op.matrix.astype(float)))
    predicted = []
    for r in charsum_eigenvalues(ctx):
        predicted += [complex(r.value)] * r.character.dim
    assert np.allclose(dense, np.sort_complex(np.array(predicted)), atol=1e-6)


@pytest.mark.parametrize("p", [3, 13, 17])
def test_table2_rows(p):
    ctx = build_context(p)
    ref = REFERENCE_DETERMINANTS[p]
    for route in ("charsum", "matrix", "cyclotomic"):
        row = table2_row(ctx, route=route)
        assert abs(row.det_total) == from_factors(ref.total)
        assert (row.det_U, row.det_W, row.det_X) == (
            from_factors(ref.U), from_factors(ref.W), from_factors(ref.X))
        assert row.det_V == (None if ref.V is None else from_factors(ref.V))


def test_table2_at_three_literal():
    row = table2_row(build_context(3))
    assert (abs(row.det_total), row.det_U, row.det_W, row.det_X, row.det_V) == (8, 2, 1, 4, None)


def test_routes_agree_per_character():
    ctx = build_context(11)
    m = {r.character: complex(r.value) for r in matrix_eigenvalues(ctx)}
    for r in charsum_eigenvalues(ctx):
        assert abs(m[r.character] - complex(r.value)) < 1e-9


def test_determinant_nonzero_at_nineteen():
    assert determinant_total(build_context(19)) != 0


def test_cyclotomic_route_beyond_table():
    ctx = build_context(23)
    comps = exact_component_determinants(ctx)
    assert comps["U"] == (23 * 23 - 1) // 4 and comps["V"] is None
    assert comps["W"] > 0 and comps["X"] > 0


def test_unknown_route():
    with pytest.raises(ValueError):
        table2_row(build_context(3), route="guess")


def test_round_exact():
    assert round_exact(Fraction(6)) == 6
    assert round_exact(complex(2.0000001, 0)) == 2
    with pytest.raises(ValueError):
        round_exact(Fraction(1, 2))
    with pytest.raises(ValueError):
        round_exact(2.01)
    assert issubclass(Table2Error, ArithmeticError)


def test_checks_pass(ctx):
    assert nonvanishing_check(ctx).ok
    rep = exactness_hypotheses_check(ctx)
    assert rep.ok, rep.failures


def test_position_values_at_b():
    ctx = build_context(5)
    rows = {(r.position, r.character): r for r in position_eigenvalues(ctx)}
    V1 = steinberg_character(5)
    r = rows[("B", V1)]
    assert r.epsilon == 0
    assert r.delta == ctx.order**2 * (5 - 1)
    assert rows[("N", V1)].delta == 0


def test_make_w_component_known():
    ctx = build_context(13)
    assert make_character(13, "W", 2, 10) in nonsplit_components(ctx)
