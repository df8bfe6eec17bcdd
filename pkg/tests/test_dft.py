import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourierlab.dft import chirpz, convolve, dft_naive, fft_pow2


def rand_vec(n, rng):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def test_naive_hadamard_column():
    np.testing.assert_allclose(dft_naive([1, 0]), [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_naive_uniform_to_point_mass():
    out = dft_naive(np.full(12, 1 / np.sqrt(12)))
    expected = np.zeros(12)
    expected[0] = 1.0
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_naive_double_apply_is_index_reversal():
    rng = np.random.default_rng(5)
    v = rand_vec(4, rng)
    twice = dft_naive(dft_naive(v))
    np.testing.assert_allclose(twice, v[(-np.arange(4)) % 4], atol=1e-12)


def test_naive_unitary():
    rng = np.random.default_rng(6)
    for n in [2, 3, 10, 37]:
        v = rand_vec(n, rng)
        assert np.linalg.norm(dft_naive(v)) == pytest.approx(np.linalg.norm(v), abs=1e-9)


def test_naive_inverse():
    rng = np.random.default_rng(7)
    v = rand_vec(9, rng)
    np.testing.assert_allclose(dft_naive(dft_naive(v), inverse=True), v, atol=1e-12)


def test_fft_matches_naive():
    rng = np.random.default_rng(8)
    for n_exp in range(0, 9):
        v = rand_vec(2**n_exp, rng)
        np.testing.assert_allclose(fft_pow2(v), dft_naive(v), atol=1e-9)


def test_fft_point_mass():
    np.testing.assert_allclose(fft_pow2([1, 0, 0, 0]), [0.5, 0.5, 0.5, 0.5])


def test_fft_rejects_non_pow2():
    with pytest.raises(ValueError):
        fft_pow2(np.ones(6))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_fft_linearity(seed, n_exp):
    rng = np.random.default_rng(seed)
    u, v = rand_vec(2**n_exp, rng), rand_vec(2**n_exp, rng)
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    np.testing.assert_allclose(
        fft_pow2(a * u + b * v), a * fft_pow2(u) + b * fft_pow2(v), atol=1e-9
    )


def test_chirpz_hadamard():
    rng = np.random.default_rng(9)
    v = rand_vec(2, rng)
    np.testing.assert_allclose(chirpz(v), dft_naive(v), atol=1e-12)


def test_chirpz_identity_on_dim_1():
    np.testing.assert_allclose(chirpz([3.0 + 1j]), [3.0 + 1j])


def test_chirpz_matches_naive():
    rng = np.random.default_rng(10)
    for n in [3, 5, 7, 12, 100, 1000]:
        v = rand_vec(n, rng)
        assert np.max(np.abs(chirpz(v) - dft_naive(v))) <= 1e-8


def test_convolve_point_mass_identity():
    rng = np.random.default_rng(11)
    a = rand_vec(8, rng)
    e0 = np.zeros(8)
    e0[0] = 1.0
    np.testing.assert_allclose(convolve(a, e0), a, atol=1e-12)


def test_convolve_point_mass_shift():
    rng = np.random.default_rng(12)
    a = rand_vec(8, rng)
    e1 = np.zeros(8)
    e1[1] = 1.0
    np.testing.assert_allclose(convolve(a, e1), np.roll(a, 1), atol=1e-12)


def test_convolution_theorem():
    rng = np.random.default_rng(13)
    for n in [4, 17, 100, 256]:
        a, b = rand_vec(n, rng), rand_vec(n, rng)
        lhs = dft_naive(convolve(a, b)) / np.sqrt(n)
        rhs = dft_naive(a) * dft_naive(b)
        assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.abs(rhs).max())
