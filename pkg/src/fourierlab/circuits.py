"""Gate set, staged circuit representation, simulator and arithmetic gadgets.

Circuits are lists of stages; gates within a stage act on disjoint wires, a
property enforced at construction.  Wire 0 carries the most significant bit
of the basis index.  Size counts gates (a permutation gadget counts as its
declared classical circuit size); depth counts stages (a stage's cost is
the largest declared depth among its gates, 1 for primitive gates).

Reversible arithmetic is simulated as exact index permutations carrying
declared (size, depth) metadata rather than gate decompositions: the cost
claims are bookkeeping, the functional behaviour is what gets verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .statevector import MAX_DIM, StateVector

MAX_GADGET_WIRES = 24


@dataclass(frozen=True)
class Hadamard:
    wire: int


@dataclass(frozen=True)
class Rotation:
    """Phase e^{2 pi i / 2^k} on |1>; negative k means the inverse rotation."""

    k: int
    wire: int


@dataclass(frozen=True)
class ControlledRotation:
    """Apply Rotation(k) to target iff control is 1."""

    k: int
    control: int
    target: int


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


@dataclass(frozen=True)
class Toffoli:
    """Controlled-controlled not; treated as a primitive gate."""

    c1: int
    c2: int
    target: int


@dataclass(frozen=True)
class Permutation:
    """Named classical bijection on the index space of wires [start, stop).

    table[x] is the image of basis index x (relative to the wire range).
    meta_size/meta_depth are the declared costs of the classical circuit
    this permutation stands for; a pure relabeling may declare (0, 0).
    """

    name: str
    start: int
    stop: int
    table: np.ndarray
    meta_size: int
    meta_depth: int

    def __post_init__(self):
        width = self.stop - self.start
        if not 1 <= width <= MAX_GADGET_WIRES:
            raise ValueError(f"permutation range width {width} out of range")
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (1 << width,):
            raise ValueError("table length must be 2^(range width)")
        if np.any(np.sort(table) != np.arange(1 << width)):
            raise ValueError(f"table of {self.name} is not a bijection")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "table", table)


Gate = Hadamard | Rotation | ControlledRotation | CNOT | Toffoli | Permutation


def gate_wires(g: Gate) -> tuple[int, ...]:
    if isinstance(g, Hadamard):
        return (g.wire,)
    if isinstance(g, Rotation):
        return (g.wire,)
    if isinstance(g, ControlledRotation):
        return (g.control, g.target)
    if isinstance(g, CNOT):
        return (g.control, g.target)
    if isinstance(g, Toffoli):
        return (g.c1, g.c2, g.target)
    if isinstance(g, Permutation):
        return tuple(range(g.start, g.stop))
    raise TypeError(f"not a gate: {g!r}")


def _check_gate(g: Gate, width: int) -> None:
    wires = gate_wires(g)
    if len(set(wires)) != len(wires):
        raise ValueError(f"gate {g!r} repeats a wire")
    if min(wires) < 0 or max(wires) >= width:
        raise ValueError(f"gate {g!r} uses wires outside 0..{width - 1}")
    if isinstance(g, (Rotation, ControlledRotation)):
        if g.k == 0 or not 1 <= abs(g.k) <= 64:
            raise ValueError(f"rotation order k={g.k} outside 1..64")


@dataclass(frozen=True)
class Circuit:
    """A staged gate list over `width` wires; stages are parallel layers."""

    width: int
    stages: tuple[tuple[Gate, ...], ...]

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be >= 1")
        stages = tuple(tuple(s) for s in self.stages)
        for stage in stages:
            used: set[int] = set()
            for g in stage:
                _check_gate(g, self.width)
                w = set(gate_wires(g))
                if used & w:
                    raise ValueError(f"stage reuses wires {sorted(used & w)}")
                used |= w
        object.__setattr__(self, "stages", stages)

    def size(self) -> int:
        return size_depth(self)[0]

    def depth(self) -> int:
        return size_depth(self)[1]


def size_depth(c: Circuit) -> tuple[int, int]:
    """Exact (size, depth) with declared gadget metadata folded in."""
    size = 0
    depth = 0
    for stage in c.stages:
        stage_depth = 0
        for g in stage:
            if isinstance(g, Permutation):
                size += g.meta_size
                stage_depth = max(stage_depth, g.meta_depth)
            else:
                size += 1
                stage_depth = max(stage_depth, 1)
        depth += stage_depth
    return size, depth


def _rot_phase(k: int) -> complex:
    return np.exp(np.sign(k) * 2j * np.pi / (1 << abs(k)))


def apply(c: Circuit, s: StateVector) -> StateVector:
    """Apply the circuit to a state of dimension 2^width."""
    if s.dim != 1 << c.width:
        raise ValueError(f"state dim {s.dim} != 2^{c.width}")
    amp = s.amp.astype(np.complex128).reshape((2,) * c.width)
    for stage in c.stages:
        for g in stage:
            amp = _apply_gate(g, amp, c.width)
    return StateVector(amp.reshape(-1))


def _apply_gate(g: Gate, amp: np.ndarray, width: int) -> np.ndarray:
    if isinstance(g, Hadamard):
        m = np.moveaxis(amp, g.wire, 0)
        a0, a1 = m[0].copy(), m[1].copy()
        m[0] = (a0 + a1) / np.sqrt(2)
        m[1] = (a0 - a1) / np.sqrt(2)
        return amp
    if isinstance(g, Rotation):
        m = np.moveaxis(amp, g.wire, 0)
        m[1] = m[1] * _rot_phase(g.k)
        return amp
    if isinstance(g, ControlledRotation):
        m = np.moveaxis(amp, (g.control, g.target), (0, 1))
        m[1, 1] = m[1, 1] * _rot_phase(g.k)
        return amp
    if isinstance(g, CNOT):
        m = np.moveaxis(amp, (g.control, g.target), (0, 1))
        m[1] = m[1, ::-1]
        return amp
    if isinstance(g, Toffoli):
        m = np.moveaxis(amp, (g.c1, g.c2, g.target), (0, 1, 2))
        m[1, 1] = m[1, 1, ::-1]
        return amp
    if isinstance(g, Permutation):
        flat = amp.reshape(1 << g.start, 1 << (g.stop - g.start), -1)
        inverse = np.empty_like(g.table)
        inverse[g.table] = np.arange(g.table.shape[0])
        return flat[:, inverse, :].reshape(amp.shape)
    raise TypeError(f"not a gate: {g!r}")


def reverse(c: Circuit) -> Circuit:
    """The inverse circuit: stages reversed, each gate inverted."""
    inv_stages = []
    for stage in reversed(c.stages):
        inv_stages.append(tuple(_invert_gate(g) for g in stage))
    return Circuit(c.width, tuple(inv_stages))


def _invert_gate(g: Gate) -> Gate:
    if isinstance(g, (Hadamard, CNOT, Toffoli)):
        return g
    if isinstance(g, Rotation):
        return Rotation(-g.k, g.wire)
    if isinstance(g, ControlledRotation):
        return ControlledRotation(-g.k, g.control, g.target)
    if isinstance(g, Permutation):
        inverse = np.empty_like(g.table)
        inverse[g.table] = np.arange(g.table.shape[0])
        name = g.name[:-1] if g.name.endswith("'") else g.name + "'"
        return Permutation(name, g.start, g.stop, inverse, g.meta_size, g.meta_depth)
    raise TypeError(f"not a gate: {g!r}")


def concat(circuits: list[Circuit]) -> Circuit:
    """Concatenate circuits of equal width, preserving stage structure."""
    if not circuits:
        raise ValueError("nothing to concatenate")
    width = circuits[0].width
    stages: list[tuple[Gate, ...]] = []
    for c in circuits:
        if c.width != width:
            raise ValueError("width mismatch in concat")
        stages.extend(c.stages)
    return Circuit(width, tuple(stages))


def embed(c: Circuit, width: int, offset: int) -> Circuit:
    """Re-address a circuit onto wires [offset, offset + c.width)."""
    if offset < 0 or offset + c.width > width:
        raise ValueError(f"cannot embed width-{c.width} circuit at {offset} in {width} wires")
    stages = tuple(tuple(_shift_gate(g, offset) for g in stage) for stage in c.stages)
    return Circuit(width, stages)


def _shift_gate(g: Gate, o: int) -> Gate:
    if isinstance(g, Hadamard):
        return Hadamard(g.wire + o)
    if isinstance(g, Rotation):
        return Rotation(g.k, g.wire + o)
    if isinstance(g, ControlledRotation):
        return ControlledRotation(g.k, g.control + o, g.target + o)
    if isinstance(g, CNOT):
        return CNOT(g.control + o, g.target + o)
    if isinstance(g, Toffoli):
        return Toffoli(g.c1 + o, g.c2 + o, g.target + o)
    if isinstance(g, Permutation):
        return Permutation(g.name, g.start + o, g.stop + o, g.table, g.meta_size, g.meta_depth)
    raise TypeError(f"not a gate: {g!r}")


def merge_stages(circuits: list[Circuit]) -> Circuit:
    """Overlay equal-width circuits so their i-th stages run together.

    The circuits must touch pairwise disjoint wires stage by stage; the
    Circuit constructor rejects the merge otherwise.
    """
    if not circuits:
        raise ValueError("nothing to merge")
    width = circuits[0].width
    if any(c.width != width for c in circuits):
        raise ValueError("width mismatch in merge")
    longest = max(len(c.stages) for c in circuits)
    stages = tuple(
        sum((tuple(c.stages[i]) for c in circuits if i < len(c.stages)), ())
        for i in range(longest)
    )
    return Circuit(width, stages)


def dump(c: Circuit) -> str:
    """Stable debug text: one stage per line, gates ordered by lowest wire."""
    lines = []
    for stage in c.stages:
        parts = sorted((min(gate_wires(g)), _format_gate(g)) for g in stage)
        lines.append(" ".join(p for _, p in parts))
    return "\n".join(lines)


def _format_gate(g: Gate) -> str:
    if isinstance(g, Hadamard):
        return f"H({g.wire})"
    if isinstance(g, Rotation):
        return f"R({g.k},{g.wire})"
    if isinstance(g, ControlledRotation):
        return f"CR({g.k},{g.control},{g.target})"
    if isinstance(g, CNOT):
        return f"CNOT({g.control},{g.target})"
    if isinstance(g, Toffoli):
        return f"TOFF({g.c1},{g.c2},{g.target})"
    if isinstance(g, Permutation):
        return f"PERM({g.name},{g.start}:{g.stop})"
    raise TypeError(f"not a gate: {g!r}")


# --- reversible arithmetic gadgets ---------------------------------------

_TWO_REGISTER_KINDS = {"add", "sub", "add_mod", "sub_mod", "copy", "xor_into"}


def _gadget_cost(kind: str, n: int) -> tuple[int, int]:
    """Declared (size, depth) for an n-bit gadget.

    Representative counts for the classical circuit families being invoked:
    addition/subtraction (also modular) run in size O(n), depth O(log n);
    multiplication/division by a fixed constant in size O(n log n log log n),
    depth O(log n); copy is n parallel controlled-nots at size 3n depth 3,
    xor n parallel controlled-nots.
    """
    lg = max(1, (max(n, 2) - 1).bit_length())
    if kind in ("add", "sub", "add_mod", "sub_mod"):
        return 5 * n, 2 * lg
    if kind in ("mul_round", "div_round"):
        lglg = max(1, (max(lg, 2) - 1).bit_length())
        return n * lg * lglg, 3 * lg
    if kind == "copy":
        return 3 * n, 3
    if kind == "xor_into":
        return n, 1
    raise ValueError(f"unknown gadget kind {kind!r}")


def _block_value(x: np.ndarray, lo: int, hi: int, b0: int, b1: int) -> np.ndarray:
    """Value of wire block [b0, b1) within flat indices of range [lo, hi)."""
    shift = hi - b1
    return (x >> shift) & ((1 << (b1 - b0)) - 1)


def _set_block(x: np.ndarray, val: np.ndarray, lo: int, hi: int, b0: int, b1: int) -> np.ndarray:
    shift = hi - b1
    mask = ((1 << (b1 - b0)) - 1) << shift
    return (x & ~mask) | (val << shift)


def _round_half_up(num: int, den: int) -> int:
    """floor(num/den + 1/2) in exact integer arithmetic (den > 0)."""
    return (2 * num + den) // (2 * den)


def arith_gadget(kind: str, ranges, modulus: int | None = None, d=None) -> Permutation:
    """Build a reversible arithmetic permutation gate.

    ranges is a pair of (start, stop) wire ranges forming one contiguous
    block.  Two-register kinds update the second range dst from the first
    range src: add/sub (mod 2^n), add_mod/sub_mod (mod modulus, identity on
    dst >= modulus), copy and xor_into (dst ^= src).  mul_round(d)/
    div_round(d) read ranges as (j, t) with j in the high bits and compute
    the bijection (j, t) <-> nearest(d*j) + t for t below the gap to the
    next multiple; d must exceed 1 for the map to be a bijection.  Inputs
    outside the valid (j, t) region are matched to leftover outputs in
    increasing order so the gate is a total permutation.
    """
    (a0, a1), (b0, b1) = ranges
    if a1 <= a0 or b1 <= b0:
        raise ValueError("empty wire range")
    lo, hi = min(a0, b0), max(a1, b1)
    if not (a1 == b0 or b1 == a0):
        raise ValueError("wire-ranges must form a contiguous block")
    width = hi - lo
    if width > MAX_GADGET_WIRES or (1 << width) > MAX_DIM:
        raise ValueError(f"gadget width {width} too large to tabulate")
    x = np.arange(1 << width, dtype=np.int64)

    if kind in _TWO_REGISTER_KINDS:
        wa, wb = a1 - a0, b1 - b0
        src = _block_value(x, lo, hi, a0, a1)
        dst = _block_value(x, lo, hi, b0, b1)
        if kind in ("add", "sub", "copy", "xor_into") and wa != wb:
            raise ValueError("register widths must match")
        if kind == "add":
            new = (dst + src) & ((1 << wb) - 1)
        elif kind == "sub":
            new = (dst - src) & ((1 << wb) - 1)
        elif kind in ("copy", "xor_into"):
            new = dst ^ src
        else:
            n_mod = modulus
            if n_mod is None or not 2 <= n_mod <= (1 << wb):
                raise ValueError("add_mod/sub_mod need a modulus 2 <= N <= 2^width")
            eff = src % n_mod
            if kind == "add_mod":
                new = np.where(dst < n_mod, (dst + eff) % n_mod, dst)
            else:
                new = np.where(dst < n_mod, (dst - eff) % n_mod, dst)
        table = _set_block(x, new, lo, hi, b0, b1)
        name = kind if modulus is None else f"{kind}{modulus}"
        size, depth = _gadget_cost(kind, max(wa, wb))
        return Permutation(name, lo, hi, table, size, depth)

    if kind in ("mul_round", "div_round"):
        if d is None:
            raise ValueError("mul_round/div_round need the constant d")
        frac = Fraction(d)
        if frac <= 1:
            raise ValueError(f"d must be > 1 for the map to be a bijection, got {d}")
        if a1 != b0:
            raise ValueError("mul_round expects (j, t) ranges with j in the high bits")
        jw, tw = a1 - a0, b1 - b0
        if (1 << tw) < -(-frac.numerator // frac.denominator):
            raise ValueError("t register cannot hold values below d")
        base = np.array(
            [_round_half_up(frac.numerator * j, frac.denominator) for j in range((1 << jw) + 1)],
            dtype=np.int64,
        )
        gap = np.diff(base)
        j = _block_value(x, lo, hi, a0, a1)
        t = _block_value(x, lo, hi, b0, b1)
        valid = t < gap[j]
        table = np.full(x.shape[0], -1, dtype=np.int64)
        table[valid] = base[j[valid]] + t[valid]
        spare_out = np.setdiff1d(x, table[valid], assume_unique=False)
        table[~valid] = spare_out
        name = f"mul_round({frac})"
        size, depth = _gadget_cost(kind, jw + tw)
        perm = Permutation(name, lo, hi, table, size, depth)
        if kind == "div_round":
            inverse = np.empty_like(table)
            inverse[table] = x
            perm = Permutation(f"div_round({frac})", lo, hi, inverse, size, depth)
        return perm

    raise ValueError(f"unknown gadget kind {kind!r}")


def relabel_permutation(name: str, start: int, stop: int, table: np.ndarray) -> Permutation:
    """A zero-cost wire relabeling (declared size 0, depth 0)."""
    return Permutation(name, start, stop, table, 0, 0)
