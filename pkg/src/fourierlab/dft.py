"""Classical reference transforms over Z_N.

dft_naive is the O(N^2) ground truth; fft_pow2 (decimation in frequency)
and chirpz (arbitrary modulus via three power-of-2 FFTs) must agree with it,
which is the core equivalence every quantum-side test leans on.  All
transforms use the unitary normalization 1/sqrt(N) with kernel
omega_N^{jk}, omega_N = e^{2 pi i / N}.
"""

from __future__ import annotations

import numpy as np

_SQRT2 = np.sqrt(2.0)


def dft_naive(v, n: int | None = None, inverse: bool = False) -> np.ndarray:
    """Direct O(N^2) unitary DFT: out_k = (1/sqrt(N)) sum_j v_j omega^{jk}.

    The modulus n must equal len(v) when given.  inverse=True applies the
    conjugate (inverse) transform.  Rows are computed in blocks so memory
    stays O(N * block) instead of O(N^2).
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("input must be a nonempty 1-d vector")
    if n is None:
        n = v.shape[0]
    if n != v.shape[0]:
        raise ValueError(f"modulus {n} does not match vector length {v.shape[0]}")
    sign = -1.0 if inverse else 1.0
    j = np.arange(n)
    out = np.empty(n, dtype=np.complex128)
    block = max(1, (1 << 22) // max(n, 1))
    for start in range(0, n, block):
        k = np.arange(start, min(start + block, n))
        kernel = np.exp(sign * 2j * np.pi * np.outer(k, j % n) / n)
        out[start : start + k.shape[0]] = kernel @ v
    return out / np.sqrt(n)


def fft_pow2(v, inverse: bool = False) -> np.ndarray:
    """Unitary FFT over Z_{2^n} by the decimation-in-frequency recurrence.

    Each stage splits the current blocks v = (v0, v1) into the half-size
    vectors w_j = (v0_j + v1_j)/sqrt(2) and z_j = omega^j (v0_j - v1_j)/sqrt(2)
    whose transforms are the even and odd output coefficients; running the
    stages in place leaves the result in bit-reversed order, undone by one
    final permutation.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("input must be a nonempty 1-d vector")
    size = v.shape[0]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of 2")
    if inverse:
        return np.conj(fft_pow2(np.conj(v)))
    out = v.copy()
    h = size // 2
    while h >= 1:
        tw = np.exp(2j * np.pi * np.arange(h) / (2 * h))
        view = out.reshape(-1, 2 * h)
        a = view[:, :h].copy()
        b = view[:, h:].copy()
        view[:, :h] = (a + b) / _SQRT2
        view[:, h:] = (a - b) * tw / _SQRT2
        h //= 2
    return out[bit_reversal(size)]


def bit_reversal(size: int) -> np.ndarray:
    """Index permutation reversing the bit order of 0..size-1."""
    bits = size.bit_length() - 1
    idx = np.arange(size)
    rev = np.zeros(size, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _half_square_phase(count: int, n: int) -> np.ndarray:
    """chirp_i = omega_n^{i^2/2} = e^{i pi i^2 / n} for i < count.

    The exponent i^2/2 is handled as the exact rational (i^2 mod 2n)/2n, so
    the half-integer power of omega is unambiguous and periodic in 2n.
    """
    if 4 * n * n < 2**62:
        i = np.arange(count, dtype=np.int64)
        residue = (i * i) % (2 * n)
    else:
        residue = np.array([(x * x) % (2 * n) for x in range(count)], dtype=np.float64)
    return np.exp(1j * np.pi * residue / n)


def chirpz(v, n: int | None = None) -> np.ndarray:
    """DFT over any modulus N via chirp multiplication plus convolution.

    With chi_i = omega^{i^2/2}, the identity chi_i / chi_{k-i} =
    omega^{ki} / chi_k turns the transform into the cyclic convolution of
    b_i = v_i chi_i (i < N) against c_i = 1/chi_i (i < 2N), evaluated with
    three FFTs over 2^{floor(log2 N)+2} and read off at k = N..2N-1 where
    the convolution window is complete.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("input must be a nonempty 1-d vector")
    if n is None:
        n = v.shape[0]
    if n != v.shape[0]:
        raise ValueError(f"modulus {n} does not match vector length {v.shape[0]}")
    if n == 1:
        return v.copy()
    size = 1 << (int(np.log2(n)) + 2)
    chirp = _half_square_phase(2 * n, n)
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = v * chirp[:n]
    c = np.zeros(size, dtype=np.complex128)
    c[: 2 * n] = np.conj(chirp)
    d = fft_pow2(fft_pow2(b) * fft_pow2(c), inverse=True) * np.sqrt(size)
    k = np.arange(n, 2 * n)
    return d[k] * chirp[k] / np.sqrt(n)


def convolve(a, b, n: int | None = None) -> np.ndarray:
    """Cyclic convolution out_g = sum_{h+k=g mod N} a_h b_k, direct O(N^2)."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if n is None:
        n = a.shape[0]
    if a.shape != (n,) or b.shape != (n,):
        raise ValueError("both vectors must have length equal to the modulus")
    g = np.arange(n)
    return np.asarray(b)[(g[:, None] - g[None, :]) % n] @ a
