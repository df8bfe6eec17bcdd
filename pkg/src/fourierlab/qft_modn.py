"""Fourier transforms over an arbitrary modulus N.

Four routes, in increasing generality:

* `qft_smooth` is exact: the Chinese remainder theorem turns the transform
  over Z_N into independent small transforms over the coprime factors, at
  the price of an index permutation on each factor.
* `qft_chirpz_quantum` simulates the measurement-driven chirp-z reduction:
  two power-of-2 transforms of chirp-modulated registers, a register
  subtraction whose measured value h leaves a phase ramp on the input, and
  a window collapse.  When omega_S^h is close enough to some omega_N^k the
  ramp is a mod-N shift of the output and the run succeeds.
* `qft_fsl` transforms over a single large power of 2 and post-selects the
  indices nearest the rescaled lattice (M/N)j; success renormalizes the
  flagged subvector.
* `approx_qft_zn` repeats the input R times, transforms over M >= RN, and
  splits each output index into (i, t) with t the offset from the nearest
  multiple of M/N; measuring t leaves an approximate transform in i.

`eigenvalue_estimate` runs phase estimation on the +1 mod N permutation,
whose eigenvectors are the Fourier basis states prepared by
`fourier_basis_state`; it recovers the top bits of i/N from |i^>.

All success probabilities are taken by sampling an exactly computed
distribution, so runs are reproducible from the generator state alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import ceil, gcd, log2

import numpy as np

from .circuits import Circuit, Hadamard, Permutation, apply, concat, embed
from .dft import dft_naive, fft_pow2
from .qft_pow2 import build_qft_exact
from .statevector import MAX_DIM, ProbDist, StateVector, sample

# Largest per-factor modulus the CRT route will transform directly.
MAX_SMOOTH_FACTOR = 1 << 10


def nearest_int(num: int, den: int) -> int:
    """floor(num/den + 1/2) in exact integer arithmetic (den > 0)."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    return (2 * num + den) // (2 * den)


def next_pow2_at_least(x: float) -> int:
    """The smallest power of 2 that is >= x."""
    if x <= 1:
        return 1
    return 1 << ceil(log2(x))


# ---------------------------------------------------------------------------
# Smooth moduli: exact transform through the Chinese remainder theorem.


@dataclass(frozen=True)
class SmoothFactorization:
    """A modulus N split into pairwise-coprime factors with product N."""

    modulus: int
    factors: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        factors = tuple(int(m) for m in self.factors)
        if not factors or any(m < 1 for m in factors):
            raise ValueError("factors must be positive")
        prod = 1
        for m in factors:
            prod *= m
        if prod != self.modulus:
            raise ValueError(f"factors multiply to {prod}, not {self.modulus}")
        for a in range(len(factors)):
            for b in range(a + 1, len(factors)):
                if gcd(factors[a], factors[b]) != 1:
                    raise ValueError(
                        f"factors {factors[a]} and {factors[b]} share a divisor"
                    )
        object.__setattr__(self, "factors", factors)


def smooth_factorization(n: int) -> SmoothFactorization:
    """Split n into its prime-power factors (pairwise coprime)."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    rest, factors = n, []
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            q = 1
            while rest % p == 0:
                rest //= p
                q *= p
            factors.append(q)
        p += 1 if p == 2 else 2
    if rest > 1:
        factors.append(rest)
    return SmoothFactorization(n, tuple(factors) or (1,))


def crt_split(a, f: SmoothFactorization):
    """Residues (a mod m_1, ..., a mod m_k); a may be an integer array."""
    return tuple(a % m for m in f.factors)


def crt_combine(residues, f: SmoothFactorization):
    """Invert crt_split: sum of a_i * N_i * (N_i^{-1} mod m_i), mod N."""
    if len(residues) != len(f.factors):
        raise ValueError("one residue per factor required")
    total = 0
    for a_i, m in zip(residues, f.factors):
        n_i = f.modulus // m
        total = total + a_i * n_i * pow(n_i, -1, m)
    return total % f.modulus


def qft_smooth(state: StateVector, f: SmoothFactorization) -> StateVector:
    """Exact transform over Z_N for N a product of small coprime factors.

    Routing indices through crt_split turns omega_N^{ak} into the product
    over factors of omega_m^{a_m c_m k_m} with c_m = (N/m)^{-1} mod m, so
    the transform factorizes into one m-point transform per factor whose
    output rows are read in c_m-strided order, with no twiddle corrections.
    """
    if state.dim != f.modulus:
        raise ValueError(f"state dim {state.dim} does not match modulus {f.modulus}")
    if max(f.factors) > MAX_SMOOTH_FACTOR:
        raise ValueError(f"factors above {MAX_SMOOTH_FACTOR} are not supported")
    coords = crt_split(np.arange(f.modulus), f)
    tensor_amp = np.zeros([m for m in f.factors], dtype=np.complex128)
    tensor_amp[coords] = state.amp
    for axis, m in enumerate(f.factors):
        c = pow(f.modulus // m, -1, m)
        rows = (c * np.arange(m)) % m
        kernel = np.exp(2j * np.pi * np.outer(rows, np.arange(m)) / m) / np.sqrt(m)
        tensor_amp = np.moveaxis(
            np.tensordot(kernel, tensor_amp, axes=([1], [axis])), 0, axis
        )
    return StateVector(tensor_amp[coords])


# ---------------------------------------------------------------------------
# Chirp-z route: convolution by superposition, correction by measurement.


@dataclass(frozen=True)
class ChirpzOutcome:
    """One run of the chirp-z reduction.

    state is None on retry.  shift is the mod-N index shift that was undone
    on success; measured is the register difference h observed.
    """

    state: StateVector | None
    shift: int
    measured: int

    @property
    def success(self) -> bool:
        return self.state is not None


def _chirp_phase(count: int, n: int) -> np.ndarray:
    """omega_n^{i^2/2} for i < count, via the exact residue (i^2 mod 2n)."""
    i = np.arange(count, dtype=np.int64)
    return np.exp(1j * np.pi * ((i * i) % (2 * n)) / n)


def _chirpz_spectra(amp: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Transforms over S = 2^{floor(log2 n)+2} of the two chirp registers.

    The first register carries amp_i * chi_i on [0, n); the second carries
    1/chi_i on [0, 2n), wide enough that every output window k in [n, 2n)
    sees a complete convolution.
    """
    size = 1 << (n.bit_length() + 1)
    chirp = _chirp_phase(2 * n, n)
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = amp * chirp[:n]
    c = np.zeros(size, dtype=np.complex128)
    c[: 2 * n] = np.conj(chirp) / np.sqrt(2 * n)
    return fft_pow2(b), fft_pow2(c), size


def chirpz_branch(
    state: StateVector, n: int, h: int, eps: float
) -> tuple[float, StateVector, int, bool]:
    """Deterministic tail of the chirp-z run once h has been measured.

    Returns (window mass, corrected output, shift k, aligned) where aligned
    says whether omega_S^h lies within eps^2/n of omega_n^k, the condition
    under which the leftover phase ramp on the input is the pure mod-n
    shift that the correction undoes.
    """
    state.require_normalized()
    if state.dim != n:
        raise ValueError(f"state dim {state.dim} does not match modulus {n}")
    b_hat, c_hat, size = _chirpz_spectra(state.amp, n)
    joint = np.roll(b_hat, -h) * c_hat
    joint = joint / np.linalg.norm(joint)
    d = fft_pow2(joint, inverse=True)
    window = d[n : 2 * n]
    mass = float(np.sum(np.abs(window) ** 2))
    chirp = _chirp_phase(2 * n, n)
    out = window * chirp[n : 2 * n]
    out = out / np.linalg.norm(out)
    k = nearest_int(n * h, size) % n
    chord = abs(np.exp(2j * np.pi * h / size) - np.exp(2j * np.pi * k / n))
    aligned = bool(chord < eps * eps / n)
    corrected = StateVector(np.roll(out, k))
    return mass, corrected, k, aligned


def qft_chirpz_quantum(
    state: StateVector, n: int, eps: float, rng: np.random.Generator
) -> ChirpzOutcome:
    """One attempt at the transform over Z_n by chirped convolution.

    Both chirp registers are transformed over S = 2^{floor(log2 n)+2}; the
    difference of their index registers is measured as h, which leaves the
    second register holding the convolution spectrum of the inputs with a
    phase ramp omega_S^{ih} on the data.  The inverse transform, window
    collapse to [n, 2n) and chirp unwind then yield the transform of the
    ramped input; when the ramp rounds to a clean mod-n shift (aligned h),
    undoing the shift gives a state O(eps)-close to the true transform.
    """
    state.require_normalized()
    if state.dim != n or n < 2:
        raise ValueError("state dimension must equal the modulus n >= 2")
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    b_hat, c_hat, size = _chirpz_spectra(state.amp, n)
    weights_b = np.abs(b_hat) ** 2
    weights_c = np.abs(c_hat) ** 2
    p_h = np.array(
        [float(np.dot(np.roll(weights_b, -h), weights_c)) for h in range(size)]
    )
    h = int(sample(ProbDist(np.clip(p_h, 0.0, None) / p_h.sum()), rng))
    mass, corrected, k, aligned = chirpz_branch(state, n, h, eps)
    if aligned and rng.random() < mass:
        return ChirpzOutcome(corrected, k, h)
    return ChirpzOutcome(None, 0, h)


# ---------------------------------------------------------------------------
# Fourier sampling over one large power of 2.


@dataclass(frozen=True)
class FslOutcome:
    """One post-selection attempt; state is None on retry."""

    state: StateVector | None

    @property
    def success(self) -> bool:
        return self.state is not None


def fsl_flags(n: int, m: int) -> np.ndarray:
    """The flagged indices round((m/n) j) for j < n, all distinct for m >= 2n."""
    return np.array([nearest_int(m * j, n) for j in range(n)], dtype=np.int64)


def fsl_approximation(state: StateVector, n: int, m: int) -> tuple[np.ndarray, float]:
    """Subvector of the m-point transform at the flagged indices.

    Returns (sqrt(m/n)-rescaled subvector, success probability), the scaled
    form being the near-unit vector whose distance to the n-point transform
    the collapse bound controls.
    """
    state.require_normalized()
    if state.dim != n:
        raise ValueError(f"state dim {state.dim} does not match modulus {n}")
    if m & (m - 1) or m < 2 * n:
        raise ValueError("m must be a power of 2 with m >= 2n")
    padded = np.zeros(m, dtype=np.complex128)
    padded[:n] = state.amp
    spectrum = fft_pow2(padded)
    sub = spectrum[fsl_flags(n, m)]
    prob = float(np.sum(np.abs(sub) ** 2))
    return sub * np.sqrt(m / n), prob


def qft_fsl(
    state: StateVector,
    n: int,
    eps: float,
    rng: np.random.Generator,
    m: int | None = None,
) -> FslOutcome:
    """Transform over Z_n by post-selecting an m-point transform.

    m defaults to the smallest power of 2 at or above n log2(n) / eps (and
    at least 2n).  The n flagged indices nearest the multiples of m/n are
    measured against the rest; success renormalizes the flagged subvector,
    which is then within O(n log n / m) of the true transform.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    if m is None:
        m = max(next_pow2_at_least(n * log2(max(n, 2)) / eps), 2 * n)
    scaled, prob = fsl_approximation(state, n, m)
    if rng.random() < prob:
        return FslOutcome(StateVector(scaled / np.linalg.norm(scaled)))
    return FslOutcome(None)


# ---------------------------------------------------------------------------
# Repetition route: every output window approximates the transform.


@dataclass(frozen=True)
class RepetitionParams:
    """Repetition count and working modulus for the repeated transform.

    modulus is the target N; reps is the number R = 2^r of copies laid at
    j + iN; working is the transform length M, a power of 2 with M >= RN.
    """

    modulus: int
    reps: int
    working: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if self.reps < 1 or self.reps & (self.reps - 1):
            raise ValueError("reps must be a power of 2")
        if self.working & (self.working - 1):
            raise ValueError("working modulus must be a power of 2")
        if self.working < self.reps * self.modulus:
            raise ValueError(
                f"working modulus {self.working} below reps*modulus "
                f"{self.reps * self.modulus}"
            )
        if self.working > MAX_DIM:
            raise ValueError(f"working modulus {self.working} exceeds {MAX_DIM}")


@dataclass(frozen=True)
class ApproxQftResult:
    """Output of the repetition route.

    output is the renormalized i-column at the dominant offset t_chosen;
    residual is the unit bump vector over the offset window (the t-register
    state the joint output approximately factors through); joint holds the
    full spectrum rearranged as (i, t); t_values lists the window offsets
    in joint's column order.
    """

    output: StateVector
    residual: StateVector
    joint: np.ndarray
    t_values: tuple[int, ...]
    t_chosen: int


def offset_window(n: int, m: int) -> tuple[int, int]:
    """Integer offsets t with -m/2n <= t < m/2n, as (t_lo, t_hi) inclusive."""
    return -(m // (2 * n)), (m - 1) // (2 * n)


def index_split(n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Split each j < m into (i, t) with j = round((m/n) i) + t.

    i is the nearest multiple index round(j n / m) (half-up, taken mod n at
    the top wraparound) and t the signed offset from its lattice point; the
    map is one-to-one on [0, m).
    """
    j = np.arange(m, dtype=np.int64)
    i_raw = (2 * j * n + m) // (2 * m)
    lattice = (2 * m * i_raw + n) // (2 * n)
    return i_raw % n, j - lattice


def bump_vector(params: RepetitionParams) -> np.ndarray:
    """The offset-window profile of one repetition lattice point.

    This is the m-point transform of the flat comb 1/sqrt(RN) on [0, RN),
    restricted to offsets -M/2N <= t < M/2N; entry order follows
    offset_window.  Its shifts by round((M/N)i) carry the transform
    coefficients in the joint output.
    """
    n, r, m = params.modulus, params.reps, params.working
    comb = np.zeros(m, dtype=np.complex128)
    comb[: r * n] = 1.0 / np.sqrt(r * n)
    profile = fft_pow2(comb)
    t_lo, t_hi = offset_window(n, m)
    return profile[np.arange(t_lo, t_hi + 1) % m]


def approx_qft_zn(state: StateVector, params: RepetitionParams) -> ApproxQftResult:
    """Approximate transform over Z_N by R-fold repetition over Z_M.

    The input is repeated at j + iN for i < R, transformed over M, and each
    output index split into (i, t) by index_split.  For M = RN only t = 0
    carries amplitude and the i-column is the exact transform; in general
    every well-populated offset column approximates it, with joint error
    controlled by 4RN/M + 8 log2(N)/sqrt(R).
    """
    state.require_normalized()
    n, r, m = params.modulus, params.reps, params.working
    if state.dim != n:
        raise ValueError(f"state dim {state.dim} does not match modulus {n}")
    beta = np.zeros(m, dtype=np.complex128)
    beta[: r * n] = np.tile(state.amp, r) / np.sqrt(r)
    spectrum = fft_pow2(beta)
    i_of, t_of = index_split(n, m)
    t_lo, t_hi = offset_window(n, m)
    t_lo = min(t_lo, int(t_of.min()))
    t_hi = max(t_hi, int(t_of.max()))
    width = t_hi - t_lo + 1
    joint = np.zeros((n, width), dtype=np.complex128)
    joint[i_of, t_of - t_lo] = spectrum
    column_mass = np.sum(np.abs(joint) ** 2, axis=0)
    t_values = np.arange(t_lo, t_hi + 1)
    order = np.lexsort((t_values, np.abs(t_values), -column_mass))
    t_chosen = int(t_values[order[0]])
    out = joint[:, t_chosen - t_lo]
    bump = bump_vector(params)
    pad = np.zeros(width, dtype=np.complex128)
    pad[offset_window(n, m)[0] - t_lo : offset_window(n, m)[1] - t_lo + 1] = bump
    return ApproxQftResult(
        output=StateVector(out / np.linalg.norm(out)),
        residual=StateVector(pad / np.linalg.norm(pad)),
        joint=joint,
        t_values=tuple(int(t) for t in t_values),
        t_chosen=t_chosen,
    )


# ---------------------------------------------------------------------------
# Phase estimation on the +1 mod N permutation.


def fourier_basis_state(n: int, i: int) -> StateVector:
    """|i^> = (1/sqrt(n)) sum_a omega_n^{ia} |a>, the i-th transform column."""
    if not 0 <= i < n:
        raise ValueError(f"index {i} out of range for modulus {n}")
    return StateVector(np.exp(2j * np.pi * i * np.arange(n) / n) / np.sqrt(n))


def _controlled_shift(control: int, k_bits: int, width: int, n: int, p: int) -> Permutation:
    """Permutation applying a -> a + p mod n on the target block when the
    control wire is set; states a >= n and the idle wires pass through."""
    span = width - control
    values = np.arange(1 << span, dtype=np.int64)
    target_bits = width - k_bits
    low = values & ((1 << target_bits) - 1)
    on = values >> (span - 1) == 1
    shifted = np.where(on & (low < n), (low + p) % n, low)
    table = (values & ~((1 << target_bits) - 1)) | shifted
    return Permutation(f"c+{p}%{n}", control, width, table, n, n)


@lru_cache(maxsize=64)
def _phase_estimation_state(n: int, k_bits: int, i: int) -> StateVector:
    """Final state of the estimation circuit on control |0> x target |i^>."""
    target_bits = max((n - 1).bit_length(), 1)
    width = k_bits + target_bits
    if 1 << width > MAX_DIM:
        raise ValueError("control plus target registers too wide to simulate")
    stages = [tuple(Hadamard(w) for w in range(k_bits))]
    for control in range(k_bits):
        power = pow(2, k_bits - 1 - control, n)
        stages.append((_controlled_shift(control, k_bits, width, n, power),))
    circuit = concat(
        [Circuit(width, tuple(stages)), embed(build_qft_exact(k_bits), width, 0)]
    )
    init = np.zeros(1 << width, dtype=np.complex128)
    init[: n] = fourier_basis_state(n, i).amp
    return apply(circuit, StateVector(init))


def eigenvalue_distribution(n: int, k_bits: int, i: int) -> ProbDist:
    """Exact outcome distribution of the k-bit control register.

    The target register holds |i^>, an eigenvector of the +1 mod n shift
    with eigenvalue e^{-2 pi i (i/n)}; the controlled shift powers write
    that phase onto the control register, whose transform concentrates on
    the integers nearest i 2^k / n.
    """
    if n < 2 or k_bits < 1:
        raise ValueError("need modulus >= 2 and at least one control bit")
    final = _phase_estimation_state(n, k_bits, i)
    target_dim = final.dim >> k_bits
    probs = np.sum(np.abs(final.amp.reshape(1 << k_bits, target_dim)) ** 2, axis=1)
    return ProbDist(probs / probs.sum())


def eigenvalue_estimate(
    n: int, k_bits: int, i: int, rng: np.random.Generator
) -> int:
    """One measured k-bit estimate of i 2^k / n (exact when n divides 2^k)."""
    return int(sample(eigenvalue_distribution(n, k_bits, i), rng))
