"""Fourier sampling with classical rounding, and exact rational recovery.

Both samplers share the pipeline transform, measure, round.  The
known-modulus sampler tiles its input R times, transforms over a working
modulus M >= RN and rounds each measured index to the nearest multiple of
M/N; its output law is within 8 log2(N)/sqrt(R) of the transform
distribution in L1.  The unknown-period sampler transforms a periodic
stream over M directly and rounds the measured k/M to the nearest fraction
with denominator below a bound T, so the hidden period survives as the
denominator of the reduced fraction.

Rounding to fractions is exact integer arithmetic end to end: whenever
|k/M - i/N| < 1/(2TN) the convergent walk provably lands on i/N, which is
what makes denominators trustworthy evidence about the period.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dft import chirpz, fft_pow2
from .qft_modn import index_split
from .statevector import MAX_DIM, ProbDist, StateVector, sample


def _transform(amp: np.ndarray) -> np.ndarray:
    """Unitary DFT at the vector's own length, any modulus."""
    size = amp.shape[0]
    if size & (size - 1):
        return chirpz(amp)
    return fft_pow2(amp)


# ---------------------------------------------------------------------------
# Continued-fraction rounding.


def cf_round(x: Fraction, bound: int) -> Fraction:
    """The fraction p/q closest to x among all q < bound.

    Walks the continued-fraction convergents of x until the next
    denominator would reach the bound; the minimum is then either the last
    convergent or the deepest semiconvergent under the cap, and the two are
    compared exactly.  Ties go to the smaller denominator.
    """
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    if bound < 2:
        raise ValueError("denominator bound must be >= 2")
    if x.denominator < bound:
        return x
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while True:
        a = num // den
        if q0 + a * q1 >= bound:
            break
        p0, q0, p1, q1 = p1, q1, p0 + a * p1, q0 + a * q1
        num, den = den, num - a * den
    steps = (bound - 1 - q0) // q1
    candidates = (Fraction(p1, q1), Fraction(p0 + steps * p1, q0 + steps * q1))
    return min(candidates, key=lambda c: (abs(x - c), c.denominator, c.numerator))


# ---------------------------------------------------------------------------
# Known modulus: tile R times, transform over M, round indices.


def tiled_state(state: StateVector, reps: int, working: int) -> np.ndarray:
    """reps copies of the amplitudes at [0, reps*N), zero-padded to working."""
    state.require_normalized()
    n = state.dim
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if working < reps * n:
        raise ValueError(f"working modulus {working} below reps*dim {reps * n}")
    if working > MAX_DIM:
        raise ValueError(f"working modulus {working} exceeds {MAX_DIM}")
    amp = np.zeros(working, dtype=np.complex128)
    amp[: reps * n] = np.tile(state.amp, reps) / np.sqrt(reps)
    return amp


def known_sample_distribution(
    state: StateVector, reps: int, working: int
) -> ProbDist:
    """Exact output law of the known-modulus sampler over [0, N).

    Transforms the tiling over the working modulus and folds index j onto
    i = round(jN/M) mod N, accumulating the measurement weight of every j
    in its bin.
    """
    spectrum = _transform(tiled_state(state, reps, working))
    i_of, _ = index_split(state.dim, working)
    weights = np.abs(spectrum) ** 2
    p = np.bincount(i_of, weights=weights, minlength=state.dim)
    return ProbDist(p / p.sum())


def fourier_sample_known(
    state: StateVector, reps: int, working: int, rng: np.random.Generator
) -> int:
    """One sampler draw: an index in [0, N) whose law is within
    8 log2(N)/sqrt(reps) of the transform distribution in L1."""
    return int(sample(known_sample_distribution(state, reps, working), rng))


# ---------------------------------------------------------------------------
# Unknown period: transform the periodic stream, round the fraction k/M.


def periodic_state(base: StateVector, working: int) -> StateVector:
    """base repeated cyclically on [0, working), renormalized.

    working need not be a multiple of the base dimension; the last copy is
    truncated.  This is the input shape the unknown-period sampler expects,
    with base carrying one full period.
    """
    base.require_normalized()
    if working < base.dim:
        raise ValueError("working modulus must cover at least one period")
    if working > MAX_DIM:
        raise ValueError(f"working modulus {working} exceeds {MAX_DIM}")
    amp = base.amp[np.arange(working) % base.dim]
    return StateVector(amp / np.linalg.norm(amp))


def spectrum_distribution(state: StateVector) -> ProbDist:
    """Measurement law of the transform over the state's own dimension."""
    state.require_normalized()
    p = np.abs(_transform(state.amp)) ** 2
    return ProbDist(p / p.sum())


def fourier_sample_unknown(
    state: StateVector, bound: int, rng: np.random.Generator
) -> Fraction:
    """One sampler draw: measure the transform over M and cf-round k/M.

    The returned fraction has denominator below bound; when the input is a
    period-N stream with N < bound, measured indices near a multiple of M/N
    round to reduced fractions with denominator dividing N.
    """
    k = int(sample(spectrum_distribution(state), rng))
    return cf_round(Fraction(k, state.dim), bound)


# ---------------------------------------------------------------------------
# Seeded batches and their text form.


@dataclass(frozen=True)
class SampleBatch:
    """A seeded batch of sampler draws.

    samples holds indices (known modulus) or fractions (unknown period);
    params echoes the run as (modulus or bound, reps, working).  Each draw
    uses its own child generator split from seed, so batches rerun
    bit-identically and draws are order-independent.
    """

    samples: tuple[int | Fraction, ...]
    seed: int
    params: tuple[int, int, int] | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        for s in self.samples:
            if not isinstance(s, (int, Fraction)):
                raise ValueError(f"sample {s!r} is neither index nor fraction")
        if self.params is not None and len(self.params) != 3:
            raise ValueError("params must be (modulus_or_bound, reps, working)")
        object.__setattr__(self, "samples", tuple(self.samples))


def _draw_streams(seed: int, count: int) -> list[np.random.Generator]:
    """One child generator per draw, split from the master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def sample_known_batch(
    state: StateVector, reps: int, working: int, seed: int, count: int
) -> SampleBatch:
    """count draws of the known-modulus sampler under one master seed."""
    dist = known_sample_distribution(state, reps, working)
    draws = tuple(int(sample(dist, g)) for g in _draw_streams(seed, count))
    return SampleBatch(draws, seed, (state.dim, reps, working))


def sample_unknown_batch(
    state: StateVector, bound: int, seed: int, count: int
) -> SampleBatch:
    """count draws of the unknown-period sampler under one master seed."""
    dist = spectrum_distribution(state)
    m = state.dim
    draws = tuple(
        cf_round(Fraction(int(sample(dist, g)), m), bound)
        for g in _draw_streams(seed, count)
    )
    return SampleBatch(draws, seed, (bound, 1, m))


def serialize_batch(batch: SampleBatch) -> str:
    """Line format: a seed=<u64> header, then one sample per line, indices
    as bare integers and fractions as <num>/<den>."""
    lines = [f"seed={batch.seed}"]
    for s in batch.samples:
        if isinstance(s, Fraction):
            lines.append(f"{s.numerator}/{s.denominator}")
        else:
            lines.append(str(s))
    return "\n".join(lines) + "\n"


def parse_batch(text: str) -> SampleBatch:
    """Invert serialize_batch.  params are not part of the text form."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("seed="):
        raise ValueError("batch text must start with a seed= header")
    seed = int(lines[0].removeprefix("seed="))
    samples: list[int | Fraction] = []
    for ln in lines[1:]:
        if "/" in ln:
            num, _, den = ln.partition("/")
            samples.append(Fraction(int(num), int(den)))
        else:
            samples.append(int(ln))
    return SampleBatch(tuple(samples), seed)
