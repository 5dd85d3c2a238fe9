import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetlab.core_numerics import GaussRational, HermitianForm, RandomStream, random_unitary
from jetlab.curvature_mc import (
    CurvatureTensor,
    JetPoint,
    JetVector,
    cumulative,
    expected_curvature,
    finsler_power_exact,
    finsler_value,
    harmonic_sum,
    horizontal_curvature,
    load_tensor,
    mc_expected_curvature,
    morse_sum,
    q_index_partition,
    signed_bucket_sums,
    to_polar,
)
from jetlab.gg_combinatorics import apply_weighted_action
from jetlab.sphere_moments import sphere_quadratic_average


def jet(*levels):
    return JetVector(tuple(np.atleast_1d(np.asarray(l, dtype=complex)) for l in levels))


# --- Finsler metric and polar coordinates ---------------------------------

def test_finsler_single_level():
    v = np.array([3 + 4j, 1.0])
    assert finsler_value(jet(v), p=1) == pytest.approx(26.0, rel=1e-14)


def test_finsler_two_levels():
    assert finsler_value(jet([1], [1]), eps=(1, 1), p=2) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_finsler_default_p_is_k_factorial():
    xi = jet([1.0], [2.0], [0.5])
    assert finsler_value(xi) == finsler_value(xi, p=6)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.data())
def test_finsler_homogeneity(k, r, data):
    floats = st.floats(-3, 3, allow_nan=False)
    raw = [[complex(data.draw(floats), data.draw(floats)) for _ in range(r)] for _ in range(k)]
    if all(abs(v) < 1e-3 for blk in raw for v in blk):
        raw[0][0] = 1.0
    lam = complex(data.draw(st.floats(0.2, 3)), data.draw(st.floats(-3, 3)))
    xi = jet(*raw)
    scaled = jet(*apply_weighted_action(lam, xi.xi))
    eps = [1.0] + [0.5 / s for s in range(1, k)]
    lhs = finsler_value(scaled, eps)
    rhs = abs(lam) ** 2 * finsler_value(xi, eps)
    assert abs(lhs - rhs) <= 1e-12 * rhs


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.data())
def test_finsler_homogeneity_exact(k, r, data):
    ints = st.integers(-4, 4)
    xi = [[GaussRational(data.draw(ints), data.draw(ints)) for _ in range(r)] for _ in range(k)]
    lam = GaussRational(data.draw(st.integers(1, 3)), data.draw(ints))
    eps = [Fraction(1)] + [Fraction(1, s + 1) for s in range(1, k)]
    p = math.factorial(k)
    lhs = finsler_power_exact(apply_weighted_action(lam, xi), eps, p)
    assert lhs == lam.abs2() ** p * finsler_power_exact(xi, eps, p)


def test_finsler_rejects_zero_jet_and_bad_eps():
    with pytest.raises(ValueError):
        jet([0, 0], [0, 0])
    with pytest.raises(ValueError):
        finsler_value(jet([1], [1]), eps=(1, 0))


def test_finsler_exact_needs_divisible_p():
    with pytest.raises(ValueError):
        finsler_power_exact([[1], [1]], [1, 1], 3)


def test_polar_single_level():
    v = np.array([3j, 4.0])
    pt = to_polar(jet(v))
    assert pt.x.tolist() == [1.0]
    np.testing.assert_allclose(pt.u[0], v / 5)


def test_polar_equal_weights():
    pt = to_polar(jet([1.0], [1.0]), p=1)
    np.testing.assert_allclose(pt.x, [0.5, 0.5])


def test_polar_zero_level_convention():
    pt = to_polar(jet([0, 0], [1j, 0]))
    assert pt.x[0] == 0 and pt.x[1] == 1
    assert pt.u[0].tolist() == [1, 0]


def test_polar_matches_formula_and_normalizes():
    gen = RandomStream(3).generator
    for _ in range(20):
        k, r = int(gen.integers(1, 5)), int(gen.integers(1, 4))
        z = gen.standard_normal((k, r)) + 1j * gen.standard_normal((k, r))
        pt = to_polar(jet(*z))
        p = math.factorial(k)
        w = np.array([np.linalg.norm(z[s]) ** (2 * p / (s + 1)) for s in range(k)])
        np.testing.assert_allclose(pt.x, w / w.sum(), rtol=1e-10, atol=1e-300)
        assert pt.x.sum() == pytest.approx(1.0, abs=1e-15)
        np.testing.assert_allclose(np.linalg.norm(pt.u, axis=1), 1.0)


# --- horizontal curvature --------------------------------------------------

def test_horizontal_curvature_rank_one_fiber():
    rng = RandomStream(9)
    c = CurvatureTensor.random(3, 1, rng)
    pt = JetPoint([1.0], [[np.exp(0.3j)]])
    np.testing.assert_allclose(horizontal_curvature(c, pt).entries, c.c[:, :, 0, 0], atol=1e-15)


def test_horizontal_curvature_kronecker():
    c = CurvatureTensor.kronecker(2, 3)
    pt = to_polar(jet([1, 2, 0], [0, 1j, 1], [1, 1, 1]))
    expected = sum(pt.x[s] / (s + 1) for s in range(3))
    np.testing.assert_allclose(horizontal_curvature(c, pt).entries, expected * np.eye(2), atol=1e-15)


def test_horizontal_curvature_linear_and_rotation_invariant():
    rng = RandomStream(10)
    gen = rng.generator
    c1, c2 = CurvatureTensor.random(2, 3, rng.substream(0)), CurvatureTensor.random(2, 3, rng.substream(1))
    pt = to_polar(jet(*(gen.standard_normal((2, 3)) + 1j * gen.standard_normal((2, 3)))))
    lin = horizontal_curvature(CurvatureTensor(2 * c1.c - c2.c), pt).entries
    np.testing.assert_allclose(
        lin, 2 * horizontal_curvature(c1, pt).entries - horizontal_curvature(c2, pt).entries,
        atol=1e-13)
    # u_s -> U u_s together with c[i,j] -> conj(U) c[i,j] U^T keeps H fixed.
    u = random_unitary(gen, 3)
    rotated_c = CurvatureTensor(np.einsum("ab,ijbc,dc->ijad", u.conj(), c1.c, u), atol=1e-12)
    rotated_pt = JetPoint(pt.x, pt.u @ u.T)
    np.testing.assert_allclose(horizontal_curvature(rotated_c, rotated_pt).entries,
                               horizontal_curvature(c1, pt).entries, atol=1e-13)


def test_curvature_tensor_hermitian_check():
    c = np.zeros((2, 2, 1, 1), dtype=complex)
    c[0, 1, 0, 0] = 1j
    with pytest.raises(ValueError):
        CurvatureTensor(c)
    c[1, 0, 0, 0] = -1j
    CurvatureTensor(c)


def test_expected_curvature_examples():
    c = CurvatureTensor.random(2, 1, RandomStream(1))
    np.testing.assert_allclose(expected_curvature(c, 1).entries, c.c[:, :, 0, 0], atol=1e-15)
    np.testing.assert_allclose(expected_curvature(CurvatureTensor.kronecker(3, 2), 2).entries,
                               0.75 * np.eye(3), atol=1e-15)


@pytest.mark.parametrize("k, expected", [(1, Fraction(1)), (4, Fraction(25, 12))])
def test_harmonic_sum(k, expected):
    assert harmonic_sum(k) == expected


def test_harmonic_sum_log_growth():
    assert abs(float(harmonic_sum(10_000)) / math.log(10_000) - 1) <= 0.10


@pytest.mark.parametrize("label", ["zero", "kronecker", "random"])
def test_mc_expected_curvature(label):
    n, r, k = 3, 2, 3
    c = {"zero": CurvatureTensor.zero(n, r), "kronecker": CurvatureTensor.kronecker(n, r),
         "random": CurvatureTensor.random(n, r, RandomStream(77))}[label]
    est, se = mc_expected_curvature(c, k, 100_000, RandomStream(5))
    exact = expected_curvature(c, k).entries
    assert np.all(np.abs(est.entries - exact) <= 4 * se + 1e-15)
    if label == "zero":
        assert not np.any(est.entries) and not np.any(se)


def test_mc_k1_reduces_to_sphere_average():
    c = CurvatureTensor.random(2, 3, RandomStream(8))
    est, _ = mc_expected_curvature(c, 1, 20_000, RandomStream(6))
    for i in range(2):
        sphere_est, _, _ = sphere_quadratic_average(HermitianForm(c.c[i, i].T), 20_000, RandomStream(6))
        assert est.entries[i, i].real == pytest.approx(sphere_est, rel=1e-12)


# --- index sets and Morse sums --------------------------------------------

def test_morse_sum_positive_points():
    pts = [((1.0, 2.0), 0.5), ((3.0, 1.0), 1.0)]
    assert morse_sum(pts, 0, "le").value == pytest.approx(4.0)


def test_morse_sum_single_mixed_point():
    assert morse_sum([((1, -2), 1)], 1, "eq").value == 2


def test_morse_sum_degenerate_points_reported():
    res = morse_sum([((0.0, 1.0), 1.0), ((1.0, 1.0), 1.0)], 0, "le", tol=1e-12)
    assert res == (1.0, 1)


def test_morse_sum_modes():
    pts = [((1, 1, 1), 1), ((1, 1, -1), 1), ((1, -1, -1), 1), ((-1, -1, -1), 1)]
    assert morse_sum(pts, 1, "eq").value == 1
    assert morse_sum(pts, 1, "near").value == -1 + 1 - 1
    assert morse_sum(pts, 3, "le").value == -(1 - 1 + 1 - 1)
    with pytest.raises(ValueError):
        morse_sum(pts, 1, "bogus")


def _rational_points(seed, n, count):
    gen = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        eigs = tuple(Fraction(int(a) * int(s), int(b)) for a, s, b in
                     zip(gen.integers(1, 9, n), gen.choice([-1, 1], n), gen.integers(1, 7, n)))
        pts.append((eigs, Fraction(int(gen.integers(1, 5)), int(gen.integers(1, 5)))))
    return pts


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_morse_sum_le_equals_signed_bucket_identity(n):
    pts = _rational_points(n, n, 60)
    buckets = signed_bucket_sums(pts, n)
    for q in range(n + 1):
        assert morse_sum(pts, q, "le").value == (-1) ** q * sum(buckets[: q + 1])
    total = sum(w * math.prod(e) for e, w in pts)
    assert morse_sum(pts, n, "le").value == (-1) ** n * total


def test_q_index_partition_examples():
    hist = q_index_partition([((1, 2), 1), ((3, 1), 1)], 2)
    assert hist.counts == [2, 0, 0]
    hist = q_index_partition([((1, -1), 1), ((-1, -1), 1)], 2)
    assert hist.counts == [0, 1, 1]
    pts = _rational_points(0, 3, 50)
    assert cumulative(q_index_partition(pts, 3).counts)[-1] == 50


def test_q_index_partition_cumulative_monotone():
    counts = q_index_partition(_rational_points(5, 4, 80), 4).counts
    cum = cumulative(counts)
    assert all(a <= b for a, b in zip(cum, cum[1:]))


def test_q_index_partition_degenerate():
    hist = q_index_partition([((1e-14, 1.0), 1)], 2, tol=1e-12)
    assert hist.degenerate == 1 and sum(hist.counts) == 0


# --- tensor files ----------------------------------------------------------

def test_tensor_json_round_trip(tmp_path):
    c = CurvatureTensor.random(2, 2, RandomStream(4))
    path = tmp_path / "c.json"
    path.write_text(json.dumps(c.to_json()))
    np.testing.assert_allclose(load_tensor(path).c, c.c, atol=0)


def test_tensor_toml(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text('n = 1\nr = 2\nentries = [[[[[1.0, 0.0], [0.0, 2.0]], [[0.0, -2.0], [3.0, 0.0]]]]]\n')
    c = load_tensor(path)
    assert c.c[0, 0, 0, 1] == 2j and c.c[0, 0, 1, 0] == -2j


def test_tensor_file_rejects_non_hermitian(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 1, "r": 2, "entries": [[[[1, 0], [1, 0]], [[0, 0], [1, 0]]]]}))
    with pytest.raises(ValueError):
        load_tensor(path)
