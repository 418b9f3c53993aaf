import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gl2hecke.field import build_context
from gl2hecke.group import (
    ClassKind,
    GroupElement,
    brute_force_census,
    class_census,
    class_size,
    classify,
    conjugacy_classes,
    group_table,
    sigma,
)


def test_singular_rejected():
    with pytest.raises(ValueError):
        GroupElement(1, 2, 2, 4, 5)


def test_sigma_is_invertible_except_t_one():
    assert sigma(0, 5).det() == 4
    with pytest.raises(ValueError):
        sigma(1, 5)


def test_class_count_and_sizes(ctx):
    p = ctx.p
    classes = conjugacy_classes(ctx)
    assert len(classes) == p * p - 1
    census = class_census(ctx)
    assert sum(census.values()) == ctx.order
    for c in classes:
        assert census[c] == class_size(ctx, c)


def test_census_matches_elementwise_classification(small_ctx):
    assert brute_force_census(small_ctx) == class_census(small_ctx)


def test_representatives_classify_to_themselves(ctx):
    for c in conjugacy_classes(ctx):
        assert classify(ctx, c.representative(ctx)) == c


def test_table_multiplication_agrees_with_elements():
    ctx = build_context(5)
    t = group_table(ctx)
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, t.size, 200), rng.integers(0, t.size, 200)
    prod = t.mul(i, j)
    for a, b, c in zip(i, j, prod):
        assert t.element(a) * t.element(b) == t.element(c)
    assert np.all(t.mul(np.arange(t.size), t.inv) == t.identity)


@settings(max_examples=60)
@given(st.sampled_from([3, 5, 7]), st.data())
def test_class_is_conjugation_invariant(p, data):
    ctx = build_context(p)
    t = group_table(ctx)
    g = t.element(data.draw(st.integers(0, t.size - 1)))
    h = t.element(data.draw(st.integers(0, t.size - 1)))
    assert classify(ctx, h * g * h.inverse()) == classify(ctx, g)


def test_nonsplit_classes_are_elliptic(ctx):
    for c in conjugacy_classes(ctx):
        if c.kind is ClassKind.NONSPLIT:
            g = c.representative(ctx)
            disc = (g.trace() ** 2 - 4 * g.det()) % ctx.p
            assert pow(disc, (ctx.p - 1) // 2, ctx.p) == ctx.p - 1
