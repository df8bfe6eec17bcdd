"""Circuit builders for the quantum Fourier transform over Z_{2^n}.

Two families live here.  The textbook construction (`build_qft_exact`,
`build_qft_truncated`) interleaves Hadamards with controlled rotations on a
single n-wire register and reaches depth 2n-1 at size n(n+1)/2.  The shallow
family decomposes the transform into three primitives acting on four n-wire
registers:

* QFS writes |j>|0> -> |j>|j^> with one rotation column per rotation order,
  so truncating to order kmax gives depth kmax+1;
* COPY duplicates a Fourier basis state, |j^>|0> -> |j^>|j^>, with a Hadamard
  column and one modular subtraction;
* FPE erases |j> from |j>|j^>|j^>|j^> by running inverse transforms modulo
  2^{2k} on staggered 2k-wire windows of the first two copies, xoring the
  leading bits of each outcome into the j register, and undoing the window
  transforms.  The third copy is never touched, which keeps the error vectors
  of distinct basis states orthogonal.

Composing QFS, two COPYs, FPE and the reversed COPYs yields an approximate
QFT whose output lands in the second register; a classical random-shift
wrapper (`pqft`) averages away the inputs on which FPE is inaccurate.

All builders put wire 0 on the most significant bit and agree with
`dft.dft_naive` directly; the exact builder ends with a zero-cost wire
relabeling instead of leaving its output bit-reversed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import (
    CNOT,
    Circuit,
    ControlledRotation,
    Hadamard,
    apply,
    arith_gadget,
    concat,
    embed,
    merge_stages,
    relabel_permutation,
    reverse,
)
from .dft import bit_reversal, fft_pow2
from .statevector import StateVector, basis_state, mod_dist, tensor

# Widest register whose relabeling table is still cheap to hold.
MAX_QFT_WIRES = 24


@dataclass(frozen=True)
class TruncationPolicy:
    """Keep controlled rotations of order k only for k <= kmax."""

    kmax: int

    def __post_init__(self):
        if self.kmax < 2:
            raise ValueError(f"kmax must be >= 2, got {self.kmax}")


@dataclass(frozen=True)
class FpeParams:
    """Register width n and estimation window half-size k; 2k must divide n."""

    n: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n < 2 * self.k or self.n % (2 * self.k) != 0:
            raise ValueError(f"2k = {2 * self.k} must divide n = {self.n}")


def _qft_stages(n: int, kmax: int | None) -> Circuit:
    # Hadamard on wire l at stage 2l, rotation controlled by wire c > l at
    # stage l + c: the control is still untouched there and the target's
    # Hadamard is already done, so gates sharing a stage commute freely.
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_QFT_WIRES:
        raise ValueError(f"n = {n} exceeds the relabeling-table limit {MAX_QFT_WIRES}")
    stages: list[list] = [[] for _ in range(2 * n - 1)]
    for l in range(n):
        stages[2 * l].append(Hadamard(l))
        for c in range(l + 1, n):
            k = c - l + 1
            if kmax is None or k <= kmax:
                stages[l + c].append(ControlledRotation(k, c, l))
    kept = [tuple(s) for s in stages if s]
    if n > 1:
        kept.append((relabel_permutation("bitrev", 0, n, bit_reversal(1 << n)),))
    return Circuit(n, tuple(kept))


def build_qft_exact(n: int) -> Circuit:
    """Exact QFT circuit over Z_{2^n}: size n(n+1)/2, depth 2n-1."""
    return _qft_stages(n, None)


def build_qft_truncated(n: int, policy: TruncationPolicy) -> Circuit:
    """QFT circuit with rotations of order above policy.kmax omitted."""
    if policy.kmax > n:
        raise ValueError(f"kmax = {policy.kmax} exceeds register width {n}")
    return _qft_stages(n, policy.kmax)


def build_qfs(n: int, policy: TruncationPolicy | None = None) -> Circuit:
    """Fourier state computation |j>|0> -> |j>|j^> on 2n wires.

    Wires [0, n) hold j untouched; wires [n, 2n) receive the transform in
    standard bit order.  One Hadamard column, then one column per rotation
    order k: the gate controlled by input wire w writing output wire t has
    order w + t + 2 - n, so the column schedule is exactly the order and the
    truncated circuit has depth kmax + 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    kmax = n if policy is None else policy.kmax
    stages: list[list] = [[] for _ in range(n + 1)]
    stages[0] = [Hadamard(n + t) for t in range(n)]
    for w in range(n):
        for t in range(n):
            k = w + t + 2 - n
            if 1 <= k <= kmax:
                stages[k].append(ControlledRotation(k, w, n + t))
    return Circuit(2 * n, tuple(tuple(s) for s in stages if s))


def copy_fourier(n: int) -> Circuit:
    """Fourier basis state copy |j^>|0> -> |j^>|j^> on 2n wires.

    Hadamards turn the clean register into |0^>; subtracting it from the
    first register mod 2^n then sends |j^>|k^> to |j^>|(j+k)^>.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    h_column = tuple(Hadamard(n + t) for t in range(n))
    sub = arith_gadget("sub", ((n, 2 * n), (0, n)))
    return Circuit(2 * n, (h_column, (sub,)))


@dataclass(frozen=True)
class FpeWindow:
    """One estimation window of the phase-erasure circuit.

    A 2k-wire block of Fourier copy `copy_reg` starting at register-relative
    wire `offset`; after the inverse transform mod 2^{2k} its leading
    `xor_count` wires hold an estimate of j's bits starting at `j_start`.
    """

    copy_reg: int
    offset: int
    xor_count: int
    j_start: int


def fpe_windows(params: FpeParams) -> tuple[FpeWindow, ...]:
    """Window layout: copy 1 covers aligned 2k-blocks, copy 2 the same
    staggered by k, so together every k-bit run of j gets estimated once.

    Window wires are in standard bit order; the block of |j^> living on
    wires [n-2k(b+1), n-2kb) of a copy carries the phases that determine
    bits 2kb..2kb+2k of j.  The least-significant window of copy 1 has no
    fractional phase tail, so its outcome is exact and both halves are
    xored out; every other window contributes only its leading k bits.
    """
    n, k = params.n, params.k
    half = n // (2 * k)
    windows = []
    for b in range(half):
        count = 2 * k if b == half - 1 else k
        windows.append(FpeWindow(1, n - 2 * k * (b + 1), count, 2 * k * b))
    for b in range(half - 1):
        windows.append(FpeWindow(2, n - k - 2 * k * (b + 1), k, k + 2 * k * b))
    return tuple(windows)


def _copy_base(params: FpeParams, w: FpeWindow) -> int:
    return params.n * w.copy_reg + w.offset


def build_fpe(params: FpeParams) -> Circuit:
    """Phase erasure |j>|j^>|j^>|j^> -> ~ |0>|j^>|j^>|j^> on 4n wires.

    Registers are j = [0, n), copies at [n, 2n), [2n, 3n), [3n, 4n).  Depth
    is 8k - 1: two transforms mod 2^{2k} around a single xor column.  The
    fourth register never appears in a gate.
    """
    n, k = params.n, params.k
    width = 4 * n
    windows = fpe_windows(params)
    inv = reverse(build_qft_exact(2 * k))
    fwd = build_qft_exact(2 * k)
    inv_blocks = [embed(inv, width, _copy_base(params, w)) for w in windows]
    fwd_blocks = [embed(fwd, width, _copy_base(params, w)) for w in windows]
    xors = tuple(
        CNOT(_copy_base(params, w) + m, w.j_start + m)
        for w in windows
        for m in range(w.xor_count)
    )
    return concat([merge_stages(inv_blocks), Circuit(width, (xors,)), merge_stages(fwd_blocks)])


def _phase_window(n: int, j: int, offset: int, count: int) -> StateVector:
    """Wires [offset, offset+count) of |j^> as a product state."""
    amp = np.ones(1, dtype=np.complex128)
    for v in range(offset, offset + count):
        period = 1 << (v + 1)
        phase = np.exp(2j * np.pi * (j % period) / period)
        amp = np.kron(amp, np.array([1.0, phase]) / np.sqrt(2.0))
    return StateVector(amp)


def _window_unit(params: FpeParams, w: FpeWindow) -> Circuit:
    """The window's slice of the erasure circuit on xor_count + 2k wires.

    Wires [0, xor_count) stand for the j bits the window estimates, wires
    [xor_count, xor_count + 2k) for the window itself.  Distinct windows
    touch disjoint wires, so the full circuit is the tensor product of
    these units and they can be simulated independently.
    """
    k = params.k
    u = w.xor_count + 2 * k
    inv = embed(reverse(build_qft_exact(2 * k)), u, w.xor_count)
    xors = Circuit(u, (tuple(CNOT(w.xor_count + m, m) for m in range(w.xor_count)),))
    fwd = embed(build_qft_exact(2 * k), u, w.xor_count)
    return concat([inv, xors, fwd])


@dataclass(frozen=True)
class FpeBasisReport:
    """Exact action of the erasure circuit on one basis input |j>|j^>^3.

    fidelity is the overlap <0, j^, j^, j^| out>; squared_error the squared
    distance to that target; erase_probability the chance the j register
    measures 0.
    """

    fidelity: complex
    squared_error: float
    erase_probability: float


def fpe_basis_report(params: FpeParams, j: int) -> FpeBasisReport:
    """Evaluate the erasure circuit on |j>|j^>^3 window by window.

    Wires outside every window (the fringes of copy 2 and all of copy 3)
    are never touched and contribute unit factors, so the overlap and the
    erasure probability are products over windows.
    """
    n = params.n
    if not 0 <= j < 1 << n:
        raise ValueError(f"j = {j} outside register range")
    fid = 1.0 + 0j
    erase = 1.0
    for w in fpe_windows(params):
        bits = (j >> (n - w.j_start - w.xor_count)) & ((1 << w.xor_count) - 1)
        window_state = _phase_window(n, j, w.offset, 2 * params.k)
        state_in = tensor(basis_state(1 << w.xor_count, bits), window_state)
        target = tensor(basis_state(1 << w.xor_count, 0), window_state)
        out = apply(_window_unit(params, w), state_in)
        fid *= complex(np.vdot(target.amp, out.amp))
        block = out.amp.reshape(1 << w.xor_count, -1)[0]
        erase *= float(np.sum(np.abs(block) ** 2))
    return FpeBasisReport(fid, 2.0 - 2.0 * fid.real, erase)


def _bit_block(j: int, n: int, k: int, i: int) -> int:
    """The i-th k-bit block of j counted from the most significant end, 1-based."""
    return (j >> (n - k * i)) & ((1 << k) - 1)


def fpe_error_terms(params: FpeParams, j: int) -> list[float]:
    """Reciprocal circular distances 1/|j_i|_{2^k} of the blocks that sit
    just below each window's estimated bits; block 1 never appears and the
    last block's window is exact, so blocks 2..n/k-1 contribute."""
    n, k = params.n, params.k
    terms = []
    for i in range(2, n // k):
        d = int(mod_dist(_bit_block(j, n, k, i), 1 << k))
        terms.append(np.inf if d == 0 else 1.0 / d)
    return terms


def fpe_error_bound(params: FpeParams, j: int) -> float:
    """Per-input squared-error bound min(1, sum of reciprocal distances)^2."""
    return min(1.0, float(sum(fpe_error_terms(params, j)))) ** 2


def fpe_is_bad(params: FpeParams, j: int) -> bool:
    """Whether some contributing block is within 2^{k/2} of 0 mod 2^k."""
    n, k = params.n, params.k
    cut = 2.0 ** (k / 2.0)
    return any(
        mod_dist(_bit_block(j, n, k, i), 1 << k) < cut for i in range(2, n // k)
    )


@lru_cache(maxsize=8)
def _basis_tables(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    params = FpeParams(n, k)
    fid = np.empty(1 << n, dtype=np.complex128)
    for j in range(1 << n):
        fid[j] = fpe_basis_report(params, j).fidelity
    return fid, 2.0 - 2.0 * fid.real


def uqft_circuit(n: int, k: int) -> Circuit:
    """Shallow approximate QFT on 4n wires; the transform lands in wires
    [n, 2n) and the other registers return near |0>.

    QFS writes the transform of register 0 into register 1, two copies fan
    it out to registers 2 and 3, phase erasure clears register 0, and the
    reversed copies clear registers 2 and 3 again.
    """
    width = 4 * n
    qfs = embed(build_qfs(n), width, 0)
    cop1 = embed(copy_fourier(n), width, n)
    cop2 = embed(copy_fourier(n), width, 2 * n)
    fpe = build_fpe(FpeParams(n, k))
    return concat([qfs, cop1, cop2, fpe, reverse(cop2), reverse(cop1)])


@dataclass(frozen=True)
class PqftRun:
    """One shifted run: the shift drawn, the exact reference transform, and
    the run's overlap/error against the ideal joint output."""

    shift: int
    transform: StateVector
    fidelity: float
    squared_error: float


class ParallelQft:
    """Shallow QFT over Z_{2^n} wrapped in a classical random shift.

    Each run shifts the input by a fresh uniform s (cheap classically and as
    a circuit), feeds it through the shallow transform, and undoes the shift
    with the phase correction omega^{-sk} on the output register.  Shifting
    mimics a uniform input, so the expected squared error matches the
    uniform-input guarantee of the erasure stage regardless of the input.

    Run metrics are exact: because the erasure errors of distinct basis
    inputs are orthogonal, the squared error on any input is the
    probability-weighted sum of the per-basis squared errors, and the
    overlap with the ideal output is the same weighting of per-basis
    overlaps.  Nothing here samples; the rng only drives shifts.
    """

    def __init__(self, n: int, k: int, rng: np.random.Generator):
        self.params = FpeParams(n, k)
        self.n = n
        self.k = k
        self._rng = rng
        self._tables: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def circuit(self) -> Circuit:
        return uqft_circuit(self.n, self.k)

    def _fidelities(self) -> tuple[np.ndarray, np.ndarray]:
        if self._tables is None:
            self._tables = _basis_tables(self.n, self.k)
        return self._tables

    def run(self, state: StateVector) -> PqftRun:
        if state.dim != 1 << self.n:
            raise ValueError(f"state dim {state.dim} != 2^{self.n}")
        state.require_normalized()
        fid, err2 = self._fidelities()
        shift = int(self._rng.integers(1 << self.n))
        weights = np.abs(np.roll(state.amp, shift)) ** 2
        overlap = complex(np.sum(weights * fid))
        squared_error = float(np.sum(weights * err2))
        transform = StateVector(fft_pow2(state.amp))
        return PqftRun(shift, transform, abs(overlap) ** 2, squared_error)


def pqft(n: int, k: int, rng: np.random.Generator) -> ParallelQft:
    """Shift-wrapped shallow QFT; see ParallelQft."""
    return ParallelQft(n, k, rng)
