import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetlab.core_numerics import GaussRational
from jetlab.gg_combinatorics import (
    JetSpec,
    WeightedMultiIndex,
    apply_weighted_action,
    asymptotic_fiber_dimension,
    evaluate_monomial,
    fiber_dimension,
    fiber_dimension_bruteforce,
    fiber_series,
    ggdim_rows,
    monomials_of_degree,
    weighted_degree,
)


@pytest.mark.parametrize(
    "alpha, m",
    [
        (((0, 0), (0, 0)), 0),
        (((2,), (1,)), 4),
        (((1, 0), (0, 0), (0, 1)), 4),
    ],
)
def test_weighted_degree(alpha, m):
    assert weighted_degree(WeightedMultiIndex(alpha)) == m


def test_action_examples():
    xi = [[1], [1]]
    assert apply_weighted_action(1, xi) == xi
    assert apply_weighted_action(2, xi) == [[2], [4]]
    with pytest.raises(ValueError):
        apply_weighted_action(0, xi)


@pytest.mark.parametrize("k, r, m, expected", [(1, 1, 5, 1), (2, 1, 4, 3), (2, 2, 2, 5)])
def test_fiber_dimension_examples(k, r, m, expected):
    assert fiber_dimension(JetSpec(k, r), m) == expected


def test_fiber_dimension_small_table():
    # a_1 + 2 a_2 = m has floor(m/2) + 1 solutions.
    assert [fiber_dimension(JetSpec(2, 1), m) for m in range(8)] == [m // 2 + 1 for m in range(8)]


@pytest.mark.parametrize("k, r", list(itertools.product(range(1, 5), range(1, 4))))
def test_fiber_dimension_matches_enumeration(k, r):
    spec = JetSpec(k, r)
    for m in range(16):
        assert fiber_dimension(spec, m) == fiber_dimension_bruteforce(spec, m)


def test_monomial_enumeration_is_exact_degree_set():
    spec = JetSpec(3, 2)
    mons = list(monomials_of_degree(spec, 6))
    assert len(mons) == len(set(mons)) == fiber_dimension(spec, 6)
    assert all(weighted_degree(mon) == 6 for mon in mons)


def test_series_recurrence_level_by_level():
    # Adding jet level k multiplies the series by (1 - t^k)^(-r).
    for r in (1, 2, 3):
        for k in range(2, 6):
            prev = fiber_series(JetSpec(k - 1, r), 25)
            cur = fiber_series(JetSpec(k, r), 25)
            undone = list(cur)
            for _ in range(r):
                undone = [undone[j] - (undone[j - k] if j >= k else 0) for j in range(26)]
            assert undone == prev


def test_large_k_shortcut():
    assert fiber_dimension(JetSpec(50, 2), 3) == fiber_dimension(JetSpec(3, 2), 3)


def test_asymptotic_examples():
    for m in (1, 7, 100):
        assert asymptotic_fiber_dimension(JetSpec(1, 1), m) == 1 == fiber_dimension(JetSpec(1, 1), m)
        assert asymptotic_fiber_dimension(JetSpec(2, 1), m) == Fraction(m, 2)
    spec = JetSpec(2, 2)
    ratio = fiber_dimension(spec, 10**4) / asymptotic_fiber_dimension(spec, 10**4)
    assert abs(ratio - 1) <= 0.05


def test_asymptotic_requires_positive_m():
    with pytest.raises(ValueError):
        asymptotic_fiber_dimension(JetSpec(1, 1), 0)


def test_ggdim_rows_shape():
    rows = ggdim_rows(JetSpec(2, 1), 4)
    assert [r["m"] for r in rows] == list(range(5))
    assert rows[-1]["dimension"] == 3
    assert rows[0]["ratio"] is None and rows[4]["ratio"] == Fraction(3, 2)


def test_jetspec_validation():
    with pytest.raises(ValueError):
        JetSpec(0, 1)
    with pytest.raises(ValueError):
        WeightedMultiIndex(((1, -1),))


gauss = st.builds(GaussRational, st.integers(-4, 4), st.integers(-4, 4))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_monomial_homogeneity_exact(data):
    k = data.draw(st.integers(1, 3))
    r = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(0, 6))
    mons = list(monomials_of_degree(JetSpec(k, r), m))
    mon = data.draw(st.sampled_from(mons))
    xi = [[data.draw(gauss) for _ in range(r)] for _ in range(k)]
    lam = data.draw(gauss.filter(lambda z: z.abs2() != 0))
    lhs = evaluate_monomial(mon, apply_weighted_action(lam, xi))
    rhs = lam**m * evaluate_monomial(mon, xi)
    assert GaussRational._lift(lhs) == GaussRational._lift(rhs)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 5),
       st.complex_numbers(min_magnitude=0.5, max_magnitude=2.0),
       st.lists(st.complex_numbers(max_magnitude=2.0), min_size=12, max_size=12))
def test_monomial_homogeneity_float(k, r, m, lam, raw):
    xi = [raw[s * r:(s + 1) * r] for s in range(k)]
    lam_xi = apply_weighted_action(lam, xi)
    for mon in monomials_of_degree(JetSpec(k, r), m):
        lhs = evaluate_monomial(mon, lam_xi)
        rhs = lam**m * evaluate_monomial(mon, xi)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))
