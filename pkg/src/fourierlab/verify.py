"""Numerical verification of the transform-approximation bounds.

Every check computes its left-hand side exactly with the classical reference
transforms (dense, oracle-verified elsewhere) and compares against the bound,
literal where the source inequality has explicit constants and frozen
calibrated constants where it does not.  Reports serialize to one JSON object
per line.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import C_FALL, C_FB, C_FSL, C_INT
from .dft import chirpz, dft_naive, fft_pow2
from .hsp import (
    StepFunctionR,
    code_distance_z,
    real_stream_distribution,
    rescaled_grid_table,
    rescaled_step_function,
)
from .qft_modn import index_split, nearest_int
from .statevector import random_state

MAX_EXACT_GRID = 1 << 22


@dataclass(frozen=True)
class BoundReport:
    """One verified inequality: measured left-hand side against its bound."""

    theorem: str
    params: tuple[tuple[str, object], ...]
    measured: float
    bound: float
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.measured <= self.bound

    @property
    def params_dict(self) -> dict:
        return dict(self.params)

    @property
    def margin(self) -> float:
        return self.measured / self.bound if self.bound else math.inf

    def to_json(self) -> str:
        return json.dumps({
            "theorem": self.theorem,
            "params": dict(self.params),
            "measured": self.measured,
            "bound": self.bound,
            "margin": self.margin,
            "pass": self.ok,
            "seed": self.seed,
        })


def _report(theorem, params, measured, bound, seed) -> BoundReport:
    return BoundReport(theorem, tuple(params.items()), float(measured),
                       float(bound), seed)


def _transform(amp: np.ndarray) -> np.ndarray:
    """Forward reference transform at any length (fft when a power of two)."""
    m = amp.shape[0]
    return fft_pow2(amp) if m & (m - 1) == 0 else chirpz(amp)


def _flags(n: int, m: int) -> np.ndarray:
    """Nearest integer to (m/n) j for each j < n, reduced mod m."""
    return np.array([nearest_int(m * j, n) % m for j in range(n)],
                    dtype=np.int64)


def _subvector_distance(v: np.ndarray, n: int, m: int,
                        flags: np.ndarray) -> float:
    """L2 distance between the n-point transform of v and the rescaled
    flagged subvector of its m-point transform."""
    padded = np.zeros(m, dtype=np.complex128)
    padded[:n] = v
    sub = _transform(padded)[flags] * math.sqrt(m / n)
    return float(np.linalg.norm(dft_naive(v) - sub))


def verify_fsl(n: int, m: int, trials: int, rng: np.random.Generator,
               seed: int | None = None) -> BoundReport:
    """Flagged-subvector approximation for random unit vectors.

    The rescaled subvector of the m-point transform at the n flagged indices
    stays within C_FSL * n log2(n) / m of the n-point transform.
    """
    if m <= n:
        raise ValueError("m must exceed n")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    flags = _flags(n, m)
    worst = 0.0
    for _ in range(trials):
        v = random_state(n, rng).amp
        worst = max(worst, _subvector_distance(v, n, m, flags))
    bound = C_FSL * n * math.log2(max(n, 2)) / m
    return _report("fsl", {"N": n, "M": m, "trials": trials}, worst, bound,
                   seed)


def verify_fsl_basis(n: int, m: int, seed: int | None = None) -> BoundReport:
    """Same subvector distance on every Fourier-basis input, against the
    sharper C_FB * n / m rate that holds for point-mass spectra."""
    if m <= n:
        raise ValueError("m must exceed n")
    flags = _flags(n, m)
    i = np.arange(n)
    worst = 0.0
    for j in range(n):
        v = np.exp(-2j * np.pi * i * j / n) / math.sqrt(n)
        worst = max(worst, _subvector_distance(v, n, m, flags))
    return _report("fsl-basis", {"N": n, "M": m}, worst, C_FB * n / m, seed)


def _pointmass_matrix(n: int, m: int) -> np.ndarray:
    """Row j: the rescaled flagged subvector of the m-point transform of the
    j-th Fourier-basis vector (a smeared point mass at the j-th flag).

    Each entry is a length-n geometric sum, so the whole matrix costs n^2
    instead of n transforms; exact-pole positions are decided in integer
    arithmetic.  _check_pointmass_matrix ties this form back to the
    reference transform.
    """
    flags = _flags(n, m)
    j = np.arange(n, dtype=np.int64)[:, None]
    theta = flags[None, :] / m - j / n
    pole = (flags[None, :] * n - j * m) % (m * n) == 0
    num = np.exp(2j * np.pi * n * theta) - 1
    den = np.exp(2j * np.pi * theta) - 1
    a = np.full((n, n), float(n), dtype=np.complex128)
    np.divide(num, den, out=a, where=~pole)
    return a / n


def _check_pointmass_matrix(n: int, m: int, a: np.ndarray, rows):
    """Cross-check closed-form rows against the padded transform."""
    flags = _flags(n, m)
    i = np.arange(n)
    for j in rows:
        padded = np.zeros(m, dtype=np.complex128)
        padded[:n] = np.exp(-2j * np.pi * i * j / n) / math.sqrt(n)
        row = _transform(padded)[flags] * math.sqrt(m / n)
        if np.abs(a[j] - row).max() > 1e-10:
            raise AssertionError(
                f"closed form deviates from the transform at n={n}, m={m}"
            )


def _dist_mod(x: np.ndarray, modulus: float) -> np.ndarray:
    """Distance to the nearest multiple of the modulus, in [0, modulus/2]."""
    return np.abs(np.mod(x + modulus / 2, modulus) - modulus / 2)


def verify_pointmass_claims(n: int, m: int,
                            seed: int | None = None) -> BoundReport:
    """Exhaustive point-mass amplitude claims.

    For every j < n the diagonal entry obeys |1 - a_j| <= pi n / m and every
    off entry obeys |a_k| <= (n/m) / |k - j|_n, both exact inequalities with
    no calibration.  Measured is the worst ratio to its bound; the diagonal
    tightness alone is recorded in params.  m == n is allowed: the subvector
    is then the whole transform and every ratio is exactly zero.
    """
    if m < n:
        raise ValueError("m must be at least n")
    a = _pointmass_matrix(n, m)
    if n * m <= 1 << 10:
        _check_pointmass_matrix(n, m, a, range(n))
    elif n * m <= 1 << 14:
        _check_pointmass_matrix(n, m, a, (n // 2,))
    diag_tightness = float(np.abs(1 - np.diag(a)).max() / (np.pi * n / m))
    k = np.arange(n, dtype=np.float64)
    circ = _dist_mod(k[None, :] - k[:, None], n)
    off = np.abs(a) * circ / (n / m)
    np.fill_diagonal(off, 0.0)
    worst = max(diag_tightness, float(off.max()) if n > 1 else 0.0)
    return _report("pointmass",
                   {"N": n, "M": m, "diag_tightness": diag_tightness},
                   worst, 1.0, seed)


def _bump_profile(rn: int, m: int) -> np.ndarray:
    """m-point transform of the flat comb on [0, rn), as a full m-vector."""
    comb = np.zeros(m, dtype=np.complex128)
    comb[:rn] = 1.0 / math.sqrt(rn)
    return _transform(comb)


def _window_offsets(n: int, m: int) -> np.ndarray:
    """Integer offsets t with |t| < m/2n (open interval)."""
    half = (m + 2 * n - 1) // (2 * n) - 1  # largest t with t < m/2n
    return np.arange(-half, half + 1, dtype=np.int64)


def verify_ftt(n: int, r: int, m: int, trials: int, rng: np.random.Generator,
               seed: int | None = None) -> BoundReport:
    """Repetition-route joint approximation with the comb-bump witness.

    The m-point transform of r repetitions of v stays within
    4rn/m + 8 log2(n)/sqrt(r) of the sum of transform-weighted shifted
    copies of the single bump profile (literal constants).  m == rn is
    allowed: the bump is then a point mass and the distance is zero.
    """
    if m < r * n:
        raise ValueError("m must be at least r*n")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    offsets = _window_offsets(n, m)
    bump = _bump_profile(r * n, m)[offsets % m]
    flags = _flags(n, m)
    worst = 0.0
    for _ in range(trials):
        v = random_state(n, rng).amp
        w = np.zeros(m, dtype=np.complex128)
        w[: r * n] = np.tile(v, r) / math.sqrt(r)
        spectrum = _transform(w)
        vhat = dft_naive(v)
        target = np.zeros(m, dtype=np.complex128)
        for i in range(n):
            target[(flags[i] + offsets) % m] += vhat[i] * bump
        worst = max(worst, float(np.linalg.norm(spectrum - target)))
    bound = 4 * r * n / m + 8 * math.log2(max(n, 2)) / math.sqrt(r)
    return _report("ftt", {"N": n, "R": r, "M": m, "trials": trials}, worst,
                   bound, seed)


def verify_ftts(n: int, r: int, m: int, trials: int = 20,
                rng: np.random.Generator | None = None,
                seed: int | None = None) -> BoundReport:
    """Binned sampling distributions of the repetition route.

    Measuring the m-point transform of r repetitions of v and rounding each
    outcome to the nearest lattice index induces a distribution within
    8 log2(n)/sqrt(r) of the exact transform law, in L1 (literal constant).
    Any m >= rn qualifies, powers of two not required.
    """
    if m < r * n:
        raise ValueError("m must be at least r*n")
    if rng is None:
        rng = np.random.default_rng(0 if seed is None else seed)
    i_of, _ = index_split(n, m)
    worst = 0.0
    for _ in range(trials):
        v = random_state(n, rng).amp
        w = np.zeros(m, dtype=np.complex128)
        w[: r * n] = np.tile(v, r) / math.sqrt(r)
        probs = np.abs(_transform(w)) ** 2
        binned = np.bincount(i_of, weights=probs, minlength=n)
        exact = np.abs(dft_naive(v)) ** 2
        worst = max(worst, float(np.abs(binned - exact).sum()))
    bound = 8 * math.log2(max(n, 2)) / math.sqrt(r)
    return _report("ftts", {"N": n, "R": r, "M": m, "trials": trials}, worst,
                   bound, seed)


def _offpeak_matrix(n: int, m: int) -> np.ndarray:
    """The m x n matrix with entries 1/|j - (m/n) i|_m outside the lattice
    windows and 0 inside them."""
    j = np.arange(m, dtype=np.float64)[:, None]
    lattice = (m / n) * np.arange(n, dtype=np.float64)[None, :]
    dist = _dist_mod(j - lattice, float(m))
    flags = np.array([nearest_int(m * i, n) for i in range(n)],
                     dtype=np.float64)[None, :]
    in_window = _dist_mod(j - flags, float(m)) < m / (2 * n)
    out = np.zeros((m, n))
    np.divide(1.0, dist, out=out, where=~in_window)
    return out


def verify_circulant(n: int, m: int, trials: int, rng: np.random.Generator,
                     seed: int | None = None) -> BoundReport:
    """Near-circulant operator bound plus the exact circulant norm fact.

    The squared norm of the off-peak reciprocal-distance matrix applied to
    any unit vector is at most 4/n times its value summed at the all-ones
    vector.  Separately asserts, exhaustively for sizes up to 64, that a
    nonnegative circulant matrix has operator norm exactly its row sum with
    the uniform vector as top direction; that fact is exact linear algebra,
    so a violation raises instead of reporting.
    """
    if m <= 8 * n:
        raise ValueError("m must exceed 8n")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    a = _offpeak_matrix(n, m)
    bound = 4.0 / n * float((a.sum(axis=1) ** 2).sum())
    worst = 0.0
    for _ in range(trials):
        x = random_state(n, rng).amp
        worst = max(worst, float(np.linalg.norm(a @ x) ** 2))
    for size in range(2, 65):
        row = rng.random(size)
        circ = np.empty((size, size))
        for i in range(size):
            circ[i] = np.roll(row, i)
        opnorm = float(np.linalg.norm(circ, 2))
        if abs(opnorm - row.sum()) > 1e-9 * row.sum():
            raise AssertionError(
                f"circulant norm {opnorm} != row sum {row.sum()} at {size}"
            )
        uniform = np.full(size, 1 / math.sqrt(size))
        if np.linalg.norm(circ @ uniform) < opnorm - 1e-9:
            raise AssertionError(f"uniform vector not top direction at {size}")
    return _report("circulant", {"N": n, "M": m, "trials": trials}, worst,
                   bound, seed)


def _lattice_columns(n: int, r: int, m: int) -> np.ndarray:
    """Columns i < n: the m-point transform of the inverse-transform comb
    (1/sqrt(rn)) omega_n^{-ik}, k < rn; exact spread lattice points."""
    k = np.arange(r * n)
    cols = np.empty((m, n), dtype=np.complex128)
    for i in range(n):
        padded = np.zeros(m, dtype=np.complex128)
        padded[: r * n] = np.exp(-2j * np.pi * k * i / n) / math.sqrt(r * n)
        cols[:, i] = _transform(padded)
    return cols


def verify_tail_shift(n: int, r: int, m: int, trials: int = 50,
                      rng: np.random.Generator | None = None,
                      seed: int | None = None) -> BoundReport:
    """Falloff, window-shift, and joint-tail bounds for the spread lattice.

    For each lattice column: (a) every off-hit amplitude is at most
    sqrt(m/rn) * 2 / |j - (m/n) i|_m; (b) the in-window bump differs from
    the shifted zero-bump by less than 4rn/m; (c) transform-weighted tails
    of random vectors stay below 8 log2(n)/sqrt(r).  All constants literal;
    measured is the worst of the three ratios.  m == rn makes every lattice
    column a point mass and all three ratios vanish.
    """
    if m < r * n:
        raise ValueError("m must be at least r*n")
    if rng is None:
        rng = np.random.default_rng(0 if seed is None else seed)
    cols = _lattice_columns(n, r, m)
    j = np.arange(m, dtype=np.float64)[:, None]
    lattice = (m / n) * np.arange(n, dtype=np.float64)[None, :]
    dist = _dist_mod(j - lattice, float(m))
    exact_hit = (np.arange(m, dtype=np.int64)[:, None] * n
                 - m * np.arange(n, dtype=np.int64)[None, :]) % (m * n) == 0
    falloff = np.abs(cols) * dist / (2 * math.sqrt(m / (r * n)))
    falloff[exact_hit] = 0.0
    ratio_a = float(falloff.max())

    flags = _flags(n, m)
    in_window = _dist_mod(j - flags[None, :].astype(np.float64),
                          float(m)) < m / (2 * n)
    bumps = np.where(in_window, cols, 0.0)
    tails = cols - bumps
    ratio_b = 0.0
    base = bumps[:, 0]
    for i in range(n):
        shifted = np.roll(base, flags[i])
        ratio_b = max(ratio_b, float(
            np.linalg.norm(shifted - bumps[:, i]) * m / (4 * r * n)
        ))

    tail_bound = 8 * math.log2(max(n, 2)) / math.sqrt(r)
    ratio_c = 0.0
    for _ in range(trials):
        vhat = dft_naive(random_state(n, rng).amp)
        ratio_c = max(ratio_c, float(
            np.linalg.norm(tails @ vhat) / tail_bound
        ))
    params = {"N": n, "R": r, "M": m, "trials": trials,
              "falloff": ratio_a, "shift": ratio_b, "tail": ratio_c}
    return _report("tail-shift", params, max(ratio_a, ratio_b, ratio_c), 1.0,
                   seed)


def _grid_labels(f: StepFunctionR, rate: Fraction, total: int) -> np.ndarray:
    """f evaluated at (i * rate) for signed i in [-total/2, total/2), as
    labels; exact integer threshold arithmetic throughout."""
    i = np.arange(total, dtype=np.int64)
    i[i >= total // 2] -= total
    a, b = f.period.numerator, f.period.denominator
    sn, sd = rate.numerator, rate.denominator
    # position in [0, p) at scale b*sd: ((i sn b) mod (a sd)) / (b sd)
    pos = (i * (sn * b)) % (a * sd)
    vden = math.lcm(*[c.denominator for c in f.breakpoints])
    thresholds = np.array(
        [c.numerator * (b * sd * vden // c.denominator)
         for c in f.breakpoints],
        dtype=np.int64,
    )
    steps = np.searchsorted(thresholds, pos * vden, side="right") - 1
    return np.array(f.values, dtype=np.int64)[steps]


def verify_real_lemmas(f: StepFunctionR, m: int, n: int, k: int, t,
                       d: int = 2, seed: int | None = None) -> BoundReport:
    """Tail, rate-perturbation, and rescaled-separation checks for real
    period finding.

    (a) Under the exact sampling law on the mn grid, the mass beyond k^2 m
    is at most C_FALL / k, for k dividing n.  (b) Evaluating at the slightly
    wrong rate p/(np + t) instead of 1/n flips at most
    C_INT * t m / (n p) of the normalized squared state difference.
    (c) Every integral rescaling of f with period at least 4 d p keeps
    label separation 1/(2d) on the integer grid.  Measured is the worst of
    the three ratios; inputs with steps shorter than 1 are rescaled by a
    power of two first (all three statements are scale-covariant).
    """
    if k < 1 or n % k:
        raise ValueError("k must be a positive divisor of n")
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if d < 1:
        raise ValueError("d must be >= 1")
    scale = 0
    while f.min_step * (1 << scale) < 1:
        scale += 1
    if scale:
        f = rescaled_step_function(f, scale)
    total = m * n
    law = real_stream_distribution(f, f.value_bits, n, m)
    x = np.arange(total, dtype=np.int64)
    x[x >= total // 2] -= total
    tail = float(law[np.abs(x) > k * k * m].sum())
    ratio_a = tail * k / C_FALL

    p = f.period
    if t == 0:
        ratio_b = 0.0
        mismatch = 0
    else:
        base = _grid_labels(f, Fraction(1, n), total)
        skew = _grid_labels(f, p / (n * p + t), total)
        mismatch = int((base != skew).sum())
        ratio_b = (2 * mismatch / total) / (C_INT * float(t * m / (n * p)))

    if len(f.values) == 1:
        # Constant functions sit in no separation class; only the tail and
        # rate statements apply (and the tail is exactly zero).
        ratio_c = 0.0
        min_separation = None
    else:
        lo = math.ceil(4 * d * p)
        worst_sep = Fraction(1)
        for length in [lo, lo + 1, lo + 2, lo + 3, 2 * lo]:
            worst_sep = min(worst_sep,
                            code_distance_z(rescaled_grid_table(f, length)))
        # worst_sep == 0 would mean a rescaling collapsed onto a rival
        # period; report a finite failing ratio to keep the JSON standard
        ratio_c = float(Fraction(1, 2 * d) / worst_sep) if worst_sep else 1e18
        min_separation = float(worst_sep)

    params = {"p": str(p), "M": m, "N": n, "k": k, "t": str(t), "d": d,
              "rescale": scale, "tail": tail, "mismatch": mismatch,
              "min_separation": min_separation}
    return _report("real-lemmas", params, max(ratio_a, ratio_b, ratio_c),
                   1.0, seed)
