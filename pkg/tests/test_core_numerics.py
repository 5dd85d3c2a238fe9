from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetlab.core_numerics import (
    GaussRational,
    HermitianForm,
    RandomStream,
    chunked_mean,
    random_hermitian,
    random_unitary,
    rising,
    sample_unit_vector,
    signature,
    unit_vectors,
)


@pytest.mark.parametrize(
    "entries, tol, expected",
    [
        (np.eye(3), 1e-12, (3, 0, 0)),
        (np.diag([1.0, -1.0]), 1e-12, (1, 1, 0)),
        (np.diag([1.0, 1e-15, -2.0]), 1e-12, (1, 1, 1)),
    ],
)
def test_signature_examples(entries, tol, expected):
    assert signature(HermitianForm(entries), tol) == expected


def test_signature_default_tolerance_scales_with_entries():
    h = HermitianForm(np.diag([1e6, 1e-5, -3.0]))
    # 1e-5 <= 1e-10 * 1e6
    assert signature(h) == (1, 1, 1)


def test_non_hermitian_rejected_at_construction():
    with pytest.raises(ValueError):
        HermitianForm([[1, 1j], [1j, 1]])
    with pytest.raises(ValueError):
        HermitianForm(np.ones((2, 3)))


def test_negative_tolerance_rejected():
    with pytest.raises(ValueError):
        signature(HermitianForm(np.eye(2)), -1.0)


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_signature_unitary_invariance(n):
    gen = RandomStream(5, stream=n).generator
    for _ in range(10):
        # Eigenvalues bounded away from zero so the count is stable.
        ev = gen.choice([-1, 1], n) * gen.uniform(0.5, 2.0, n)
        h = HermitianForm(np.diag(ev))
        u = random_unitary(gen, n)
        assert signature(h.conjugated(u), 1e-8) == signature(h, 1e-8)


def test_random_unitary_is_unitary():
    u = random_unitary(RandomStream(1).generator, 5)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(5), atol=1e-13)


def test_random_hermitian_exactly_hermitian():
    h = random_hermitian(RandomStream(3).generator, 4)
    assert np.array_equal(h.entries, h.entries.conj().T)


def test_sample_unit_vector_norm_and_determinism():
    u1 = sample_unit_vector(1, RandomStream(9))
    assert abs(np.linalg.norm(u1) - 1) < 1e-15
    a = sample_unit_vector(4, RandomStream(9, stream=2))
    b = sample_unit_vector(4, RandomStream(9, stream=2))
    assert np.array_equal(a, b)
    c = sample_unit_vector(4, RandomStream(9, stream=3))
    assert not np.array_equal(a, c)


def test_sample_unit_vector_rejects_zero_dim():
    with pytest.raises(ValueError):
        sample_unit_vector(0, RandomStream(0))


def test_stream_draw_count_reproducible():
    s1, s2 = RandomStream(11), RandomStream(11)
    seq1 = [sample_unit_vector(3, s1) for _ in range(5)]
    seq2 = [sample_unit_vector(3, s2) for _ in range(5)]
    assert all(np.array_equal(a, b) for a, b in zip(seq1, seq2))


def test_seed_must_be_64_bit():
    with pytest.raises(ValueError):
        RandomStream(2**64)
    with pytest.raises(ValueError):
        RandomStream(-1)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_unit_vector_second_moments(r):
    def sampler(gen, m):
        u = unit_vectors(gen, m, r)
        return np.einsum("na,nb->nab", u, u.conj())

    est = chunked_mean(sampler, 100_000, RandomStream(2, stream=r))
    err = np.abs(est.mean - np.eye(r) / r)
    assert np.all(err <= 4 * est.stderr + 1e-15)


def test_second_moment_error_shrinks_like_inverse_sqrt():
    def sampler(gen, m):
        return np.abs(unit_vectors(gen, m, 2)[:, 0]) ** 2

    small = chunked_mean(sampler, 20_000, RandomStream(4))
    big = chunked_mean(sampler, 80_000, RandomStream(4))
    assert 1.7 < small.stderr / big.stderr < 2.3


def test_chunked_mean_independent_of_workers():
    def sampler(gen, m):
        return gen.standard_normal((m, 3))

    a = chunked_mean(sampler, 50_000, RandomStream(8), workers=1, chunk_size=4096)
    b = chunked_mean(sampler, 50_000, RandomStream(8), workers=3, chunk_size=4096)
    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.stderr, b.stderr)


def test_chunked_mean_matches_numpy_on_one_chunk():
    def sampler(gen, m):
        return gen.standard_normal(m)

    est = chunked_mean(sampler, 1000, RandomStream(8), chunk_size=1000)
    vals = RandomStream(8).substream(0).generator.standard_normal(1000)
    assert est.mean == pytest.approx(vals.mean(), rel=1e-12)
    assert est.stderr == pytest.approx(vals.std(ddof=1) / np.sqrt(1000), rel=1e-12)


def test_chunk_merge_matches_single_pass():
    def sampler(gen, m):
        return gen.standard_normal(m) + 3.0

    merged = chunked_mean(sampler, 10_000, RandomStream(6), chunk_size=1000)
    vals = np.concatenate([RandomStream(6).substream(j).generator.standard_normal(1000) + 3.0
                           for j in range(10)])
    assert merged.mean == pytest.approx(vals.mean(), rel=1e-13)
    assert merged.stderr == pytest.approx(vals.std(ddof=1) / 100, rel=1e-10)


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30),
       st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_rational_sum_round_trips_through_text(a, b, c, d):
    total = Fraction(a, b) + Fraction(c, d)
    assert Fraction(str(total)) == total
    assert total.denominator > 0


@given(st.integers(0, 30), st.integers(0, 12))
def test_rising_factorial_recurrence(a, b):
    assert rising(a, b + 1) == rising(a, b) * (a + b)


@settings(max_examples=50)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20),
       st.integers(0, 6))
def test_gauss_rational_matches_complex(a, b, c, d, e):
    z, w = GaussRational(a, b), GaussRational(c, d)
    prod = z * w
    assert complex(prod.re, prod.im) == complex(a, b) * complex(c, d)
    assert (z**e).abs2() == z.abs2() ** e
