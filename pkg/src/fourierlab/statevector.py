"""Dense complex statevectors, measurement distributions and distance helpers.

Everything downstream simulates quantum states as explicit vectors of
complex double-precision amplitudes indexed 0..dim-1.  This module owns the
value types (StateVector, ProbDist), the distances used in bound checks,
tensor products, and seeded measurement sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# 2^26 amplitudes = 1 GiB at 16 bytes each; larger requests fail loudly.
MAX_DIM = 1 << 26

# Input tolerance is loose (accumulated FFT roundoff); self-test tolerance
# is what freshly constructed states must meet.
NORM_TOL_INPUT = 1e-6
NORM_TOL_SELF = 1e-9


@dataclass(frozen=True)
class StateVector:
    """A complex amplitude vector over indices 0..dim-1.

    Not necessarily normalized: operations whose contract needs a unit
    vector check via ``require_normalized``.
    """

    amp: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amp, dtype=np.complex128)
        if a.ndim != 1:
            raise ValueError("amplitudes must be one-dimensional")
        if a.shape[0] < 1:
            raise ValueError("dim must be >= 1")
        if a.shape[0] > MAX_DIM:
            raise ValueError(f"dim {a.shape[0]} exceeds maximum {MAX_DIM}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "amp", a)

    @property
    def dim(self) -> int:
        return self.amp.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def require_normalized(self, tol: float = NORM_TOL_INPUT) -> None:
        if abs(self.norm - 1.0) > tol:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(self.norm - 1.0):.3e}")

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amp / n)


@dataclass(frozen=True)
class ProbDist:
    """A probability distribution over 0..support_size-1."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 1 or p.shape[0] < 1:
            raise ValueError("probabilities must be a nonempty 1-d array")
        if np.any(p < -NORM_TOL_SELF):
            raise ValueError("negative probability")
        if abs(float(p.sum()) - 1.0) > NORM_TOL_INPUT:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        p = np.clip(p, 0.0, None)
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def support_size(self) -> int:
        return self.p.shape[0]


def basis_state(dim: int, index: int) -> StateVector:
    """|index> in dimension dim."""
    if not 0 <= index < dim:
        raise ValueError(f"index {index} out of range for dim {dim}")
    amp = np.zeros(dim, dtype=np.complex128)
    amp[index] = 1.0
    return StateVector(amp)


def uniform_state(dim: int) -> StateVector:
    """Equal superposition over 0..dim-1."""
    return StateVector(np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random unit vector: normalized complex Gaussian."""
    amp = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(amp / np.linalg.norm(amp))


def l2_distance(a: StateVector, b: StateVector) -> float:
    """Euclidean distance sqrt(sum |a_i - b_i|^2)."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.linalg.norm(a.amp - b.amp))


def distribution(a: StateVector) -> ProbDist:
    """Measurement distribution p_i = |a_i|^2 of a normalized state."""
    a.require_normalized()
    return ProbDist(np.abs(a.amp) ** 2)


def sample(d: ProbDist, rng: np.random.Generator) -> int:
    """Draw one index from d; deterministic for a fixed generator state."""
    return sample_many(d, rng, 1)[0]


def sample_many(d: ProbDist, rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw count indices from d by inverse-CDF lookup."""
    cdf = np.cumsum(d.p)
    u = rng.random(count) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, d.support_size - 1)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; amplitude at (i * b.dim + j) is a_i * b_j."""
    if a.dim * b.dim > MAX_DIM:
        raise ValueError(f"tensor dim {a.dim * b.dim} exceeds maximum {MAX_DIM}")
    return StateVector(np.kron(a.amp, b.amp))


def l1_distance(d1: ProbDist, d2: ProbDist) -> float:
    """Total variation style L1 distance sum |p_i - q_i|.

    Distributions of unequal support are compared by zero-padding the
    shorter one.
    """
    p, q = d1.p, d2.p
    if p.shape[0] < q.shape[0]:
        p = np.pad(p, (0, q.shape[0] - p.shape[0]))
    elif q.shape[0] < p.shape[0]:
        q = np.pad(q, (0, p.shape[0] - q.shape[0]))
    return float(np.abs(p - q).sum())


def mod_dist(x, n):
    """Distance |x|_n = min(x mod n, n - x mod n) to the nearest multiple of n.

    Works elementwise on arrays and for real (non-integer) x; the result is
    always in [0, n/2].
    """
    r = np.mod(x, n)
    return np.minimum(r, n - r)
