"""Command-line front end: run any algorithm or verification suite with
explicit parameters and a seed, emitting machine-readable results.

Output is one JSON object per result line (or CSV with a header row); every
line echoes the command, its parameters, and the seed, so a rerun with the
same arguments is byte-identical.  Exit codes: 0 success, 1 algorithmic
failure (failed bound, wrong recovery, all attempts discarded), 2 invalid
input, 3 oracle file error.
"""

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .circuits import apply, size_depth
from .dft import dft_naive
from .hsp import (
    GroupSpec,
    OracleAbelian,
    OraclePeriodicZ,
    OracleZ2n,
    RetrySignal,
    StepFunctionR,
    SubgroupSpec,
    coset_oracle,
    hsp_abelian,
    leading_bits,
    period_r_detailed,
    period_z,
    periodic_oracle,
    random_step_function,
    read_oracle,
    relaxed_coset_oracle,
    relaxed_periodic_oracle,
    simon,
    simon_oracle,
    span_elements,
)
from .qft_modn import (
    RepetitionParams,
    approx_qft_zn,
    eigenvalue_estimate,
    next_pow2_at_least,
    qft_chirpz_quantum,
    qft_smooth,
    smooth_factorization,
)
from .qft_pow2 import TruncationPolicy, build_qft_exact, build_qft_truncated, pqft
from .sampling import sample_known_batch, sample_unknown_batch
from .statevector import basis_state, periodic_state, random_state
from .verify import (
    verify_circulant,
    verify_fsl,
    verify_fsl_basis,
    verify_ftt,
    verify_ftts,
    verify_pointmass_claims,
    verify_real_lemmas,
    verify_tail_shift,
)

EXIT_OK = 0
EXIT_ALGORITHM = 1
EXIT_USAGE = 2
EXIT_ORACLE = 3

THEOREMS = ("fsl", "fsl-basis", "pointmass", "ftt", "ftts", "circulant",
            "tail-shift", "real-lemmas")


class CliError(Exception):
    """A failure with a dedicated exit code and one-line message."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# Rendering.


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ";".join(
            " ".join(str(c) for c in x) if isinstance(x, (list, tuple))
            else str(x)
            for x in v
        )
    if isinstance(v, dict):
        return ";".join(f"{k}={val}" for k, val in v.items())
    return str(v)


def _render(rows: list[dict], fmt: str) -> list[str]:
    if fmt == "json":
        return [json.dumps(r) for r in rows]
    header = list(rows[0])
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(_cell(r.get(k)) for k in header))
    return lines


def _emit(lines: list[str], out: str | None):
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _echo(args, command: str, **params) -> dict:
    row = {"command": command, **params}
    if getattr(args, "seed", None) is not None:
        row["seed"] = args.seed
    row["version"] = __version__
    return row


# ---------------------------------------------------------------------------
# Shared argument plumbing.


def _add_io(p: argparse.ArgumentParser):
    p.add_argument("--out", metavar="PATH",
                   help="write results to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="json: one object per line; csv: header row then data")


def _add_seed(p: argparse.ArgumentParser, required=True):
    p.add_argument("--seed", type=int, required=required,
                   help="64-bit seed; reruns with the same seed are "
                        "byte-identical (0 <= seed < 2^64)")


def _require(args, names: list[str], context: str):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise CliError(f"{context} requires {flags}", EXIT_USAGE)


def _load_oracle(path: str, want: type):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"oracle file {path}: {e.strerror or e}", EXIT_ORACLE)
    try:
        oracle = read_oracle(text)
    except ValueError as e:
        raise CliError(str(e), EXIT_ORACLE)
    if not isinstance(oracle, want):
        raise CliError(
            f"oracle file {path} holds a {type(oracle).__name__}, "
            f"this command needs a {want.__name__}", EXIT_ORACLE)
    return oracle


def _parse_fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"{what} must be a rational like 5/2, got {text!r}",
                       EXIT_USAGE)


def _span_set(sub: SubgroupSpec) -> frozenset:
    return frozenset(tuple(int(v) for v in row) for row in span_elements(sub))


def _square_wave(period: Fraction) -> StepFunctionR:
    return StepFunctionR(period, (0, period / 2), (0, 2), 2)


# ---------------------------------------------------------------------------
# Transform subcommands.


def _matrix_rows(circuit, dim: int) -> list[dict]:
    cols = []
    for j in range(dim):
        cols.append(apply(circuit, basis_state(dim, j)).amp)
    matrix = np.stack(cols, axis=1)
    rows = []
    for k in range(dim):
        rows.append({f"col{j}": repr(complex(matrix[k, j])).strip("()")
                     for j in range(dim)})
    return rows


def cmd_qft_exact(args):
    circuit = build_qft_exact(args.n)
    size, depth = size_depth(circuit)
    if args.emit_matrix:
        if args.n > 10:
            raise CliError("matrix emission is capped at n = 10 "
                           "(2^n x 2^n entries)", EXIT_USAGE)
        return _matrix_rows(circuit, 1 << args.n), EXIT_OK
    return [_echo(args, "qft-exact", n=args.n, size=size, depth=depth)], EXIT_OK


def cmd_qft_aqft(args):
    circuit = build_qft_truncated(args.n, TruncationPolicy(args.kmax))
    size, depth = size_depth(circuit)
    rng = np.random.default_rng(args.seed)
    v = random_state(1 << args.n, rng)
    err = float(np.linalg.norm(apply(circuit, v).amp - dft_naive(v.amp)))
    return [_echo(args, "qft-aqft", n=args.n, kmax=args.kmax, size=size,
                  depth=depth, error=err)], EXIT_OK


def cmd_qft_parallel(args):
    rng = np.random.default_rng(args.seed)
    runner = pqft(args.n, args.k, rng)
    v = random_state(1 << args.n, rng)
    rows = []
    for t in range(args.trials):
        run = runner.run(v)
        rows.append(_echo(args, "qft-parallel", n=args.n, k=args.k, trial=t,
                          shift=run.shift, fidelity=run.fidelity,
                          squared_error=run.squared_error))
    return rows, EXIT_OK


def cmd_qft_modn(args):
    n, r = args.modulus, args.reps
    if args.working is None and args.auto_m is None:
        raise CliError("qft-modn requires --working or --auto-m eps=<val>",
                       EXIT_USAGE)
    policy = None
    m = args.working
    if m is None:
        policy = args.auto_m
        if not policy.startswith("eps="):
            raise CliError("--auto-m takes the form eps=<float>", EXIT_USAGE)
        eps = float(policy[4:])
        tail = 8 * math.log2(max(n, 2)) / math.sqrt(r)
        if tail >= eps:
            raise CliError(
                f"eps themselves {eps} is below the repetition floor {tail:.4f}; "
                "raise --reps", EXIT_USAGE)
        m = max(next_pow2_at_least(4 * r * n / (eps - tail)),
                next_pow2_at_least(r * n))
    rng = np.random.default_rng(args.seed)
    v = random_state(n, rng)
    result = approx_qft_zn(v, RepetitionParams(n, r, m))
    dist = float(np.linalg.norm(result.output.amp - dft_naive(v.amp)))
    bound = 4 * r * n / m + 8 * math.log2(max(n, 2)) / math.sqrt(r)
    return [_echo(args, "qft-modn", modulus=n, reps=r, working=m,
                  m_policy=policy, t_chosen=result.t_chosen, distance=dist,
                  joint_bound=bound)], EXIT_OK


def cmd_qft_chirpz(args):
    rng = np.random.default_rng(args.seed)
    v = random_state(args.modulus, rng)
    ideal = dft_naive(v.amp)
    rows, successes = [], 0
    for t in range(args.trials):
        outcome = qft_chirpz_quantum(v, args.modulus, args.eps, rng)
        row = _echo(args, "qft-chirpz", modulus=args.modulus, eps=args.eps,
                    trial=t, success=outcome.success, measured=outcome.measured)
        if outcome.success:
            successes += 1
            overlap = np.vdot(ideal, outcome.state.amp)
            phase = overlap / abs(overlap) if abs(overlap) else 1.0
            row["error"] = float(
                np.linalg.norm(outcome.state.amp - phase * ideal))
            row["shift"] = outcome.shift
        else:
            row["error"] = None
            row["shift"] = None
        rows.append(row)
    return rows, EXIT_OK if successes else EXIT_ALGORITHM


def cmd_qft_smooth(args):
    f = smooth_factorization(args.modulus)
    rng = np.random.default_rng(args.seed)
    v = random_state(args.modulus, rng)
    err = float(np.linalg.norm(qft_smooth(v, f).amp - dft_naive(v.amp)))
    return [_echo(args, "qft-smooth", modulus=args.modulus,
                  factors=list(f.factors), error=err)], EXIT_OK


def cmd_eig_est(args):
    n, k_bits, i = args.modulus, args.k_bits, args.index
    rng = np.random.default_rng(args.seed)
    target = i * (1 << k_bits) / n
    rows = []
    for t in range(args.trials):
        est = eigenvalue_estimate(n, k_bits, i, rng)
        rows.append(_echo(args, "eig-est", modulus=n, k_bits=k_bits, index=i,
                          trial=t, estimate=est, target=target))
    return rows, EXIT_OK


# ---------------------------------------------------------------------------
# Sampling subcommands.


def cmd_sample_known(args):
    rng = np.random.default_rng(args.seed)
    v = random_state(args.modulus, rng)
    batch = sample_known_batch(v, args.reps, args.working, args.seed,
                               args.count)
    return [_echo(args, "sample-known", modulus=args.modulus, reps=args.reps,
                  working=args.working, count=args.count,
                  samples=list(batch.samples))], EXIT_OK


def cmd_sample_unknown(args):
    rng = np.random.default_rng(args.seed)
    residue = int(rng.integers(args.period))
    st = periodic_state(basis_state(args.period, residue), args.working)
    batch = sample_unknown_batch(st, args.bound, args.seed, args.count)
    return [_echo(args, "sample-unknown", period=args.period,
                  bound=args.bound, working=args.working, residue=residue,
                  count=args.count,
                  samples=[str(s) for s in batch.samples])], EXIT_OK


# ---------------------------------------------------------------------------
# Hidden subgroup subcommands.


def cmd_simon(args):
    rng = np.random.default_rng(args.seed)
    if args.oracle:
        oracle = _load_oracle(args.oracle, OracleZ2n)
        if oracle.n != args.n:
            raise CliError(
                f"oracle file is over {oracle.n}-bit strings, --n says "
                f"{args.n}", EXIT_USAGE)
    else:
        b = int(rng.integers(1 << args.n))
        oracle = simon_oracle(args.n, b, rng)
    recovered = simon(oracle, rng)
    match = recovered == oracle.hidden
    row = _echo(args, "simon", n=args.n, recovered_b=recovered,
                hidden_b=oracle.hidden, match=match,
                queries=oracle.query_count,
                source=args.oracle or "generated")
    return [row], EXIT_OK if match else EXIT_ALGORITHM


def _parse_orders(text: str) -> GroupSpec:
    try:
        return GroupSpec(tuple(int(p) for p in text.split(",")))
    except ValueError as e:
        raise CliError(f"bad --orders: {e}", EXIT_USAGE)


def _parse_generators(group: GroupSpec, text: str) -> SubgroupSpec:
    try:
        gens = tuple(
            tuple(int(c) for c in part.split())
            for part in text.split(";") if part.strip()
        )
        return SubgroupSpec(group, gens)
    except ValueError as e:
        raise CliError(f"bad --subgroup: {e}", EXIT_USAGE)


def _hsp_common(args, relaxed_d: int | None):
    rng = np.random.default_rng(args.seed)
    if args.oracle:
        oracle = _load_oracle(args.oracle, OracleAbelian)
        group = oracle.group
    else:
        _require(args, ["orders"], "hsp without --oracle")
        group = _parse_orders(args.orders)
        if args.subgroup is not None:
            sub = _parse_generators(group, args.subgroup)
        else:
            gens = (tuple(int(rng.integers(0, p)) for p in group.orders),)
            sub = SubgroupSpec(group, gens)
        if relaxed_d is None:
            oracle = coset_oracle(group, sub, rng)
        else:
            oracle = relaxed_coset_oracle(group, sub, relaxed_d, rng)
    recovered = hsp_abelian(oracle, rng, relaxed_d=relaxed_d)
    match = None
    if oracle.hidden is not None:
        match = _span_set(recovered) == _span_set(oracle.hidden)
    command = "hsp" if relaxed_d is None else "hsp-relaxed"
    row = _echo(args, command, orders=list(group.orders),
                generators=[list(g) for g in recovered.generators],
                queries=oracle.query_count, match=match,
                source=args.oracle or "generated")
    if relaxed_d is not None:
        row["d"] = relaxed_d
    code = EXIT_ALGORITHM if match is False else EXIT_OK
    return [row], code


def cmd_hsp(args):
    return _hsp_common(args, None)


def cmd_hsp_relaxed(args):
    return _hsp_common(args, args.d)


def cmd_period_z(args):
    rng = np.random.default_rng(args.seed)
    if args.oracle:
        oracle = _load_oracle(args.oracle, OraclePeriodicZ)
    else:
        _require(args, ["period"], "period-z without --oracle")
        if args.relaxed_d is None:
            oracle = periodic_oracle(args.period, rng)
        else:
            oracle = relaxed_periodic_oracle(args.period, args.relaxed_d, rng)
    recovered = period_z(oracle, args.bound, rng, relaxed_d=args.relaxed_d,
                         working=args.working, samples=args.samples)
    match = recovered == oracle.period
    row = _echo(args, "period-z", bound=args.bound, recovered=recovered,
                true_period=oracle.period, relaxed_d=args.relaxed_d,
                queries=oracle.query_count, match=match,
                source=args.oracle or "generated")
    return [row], EXIT_OK if match else EXIT_ALGORITHM


def cmd_period_r(args):
    rng = np.random.default_rng(args.seed)
    if args.grid_m is None or args.grid_n is None:
        if not args.desk_scale:
            raise CliError(
                "period-r requires --grid-m and --grid-n, or --desk-scale "
                "for the tuned 2^8 / 2^12 pair", EXIT_USAGE)
        grid_m, grid_n = 1 << 8, 1 << 12
    else:
        grid_m, grid_n = args.grid_m, args.grid_n
    if args.oracle:
        f = _load_oracle(args.oracle, StepFunctionR)
    else:
        _require(args, ["period"], "period-r without --oracle")
        period = _parse_fraction(args.period, "--period")
        f = random_step_function(period, args.value_bits, rng, d=args.d)
    params = {"M": grid_m, "N": grid_n}
    result = period_r_detailed(f, args.n, args.k, args.m, params, rng,
                               samples=args.samples)
    truth = leading_bits(f.period, args.m)
    match = result.bits == truth
    row = _echo(args, "period-r", period=str(f.period), n=args.n, k=args.k,
                m=args.m, grid_m=grid_m, grid_n=grid_n,
                recovered_bits=result.bits, true_bits=truth, match=match,
                votes=[list(v) for v in result.votes], kept=result.kept,
                discarded=result.discarded, samples=result.samples,
                queries=f.query_count, source=args.oracle or "generated")
    return [row], EXIT_OK if match else EXIT_ALGORITHM


# ---------------------------------------------------------------------------
# Verification dispatch.


def cmd_verify(args):
    tid = args.theorem
    seed = args.seed
    rng = np.random.default_rng(seed)
    if tid == "fsl":
        _require(args, ["N", "M"], "verify fsl")
        rep = verify_fsl(args.N, args.M, args.trials, rng, seed=seed)
    elif tid == "fsl-basis":
        _require(args, ["N", "M"], "verify fsl-basis")
        rep = verify_fsl_basis(args.N, args.M, seed=seed)
    elif tid == "pointmass":
        _require(args, ["N", "M"], "verify pointmass")
        rep = verify_pointmass_claims(args.N, args.M, seed=seed)
    elif tid == "ftt":
        _require(args, ["N", "R"], "verify ftt")
        m = args.M if args.M is not None else next_pow2_at_least(
            8 * args.R * args.N)
        rep = verify_ftt(args.N, args.R, m, args.trials, rng, seed=seed)
    elif tid == "ftts":
        _require(args, ["N", "R"], "verify ftts")
        m = args.M if args.M is not None else args.R * args.N + 17 * args.N
        rep = verify_ftts(args.N, args.R, m, trials=args.trials, rng=rng,
                          seed=seed)
    elif tid == "circulant":
        _require(args, ["N", "M"], "verify circulant")
        rep = verify_circulant(args.N, args.M, args.trials, rng, seed=seed)
    elif tid == "tail-shift":
        _require(args, ["N", "R"], "verify tail-shift")
        m = args.M if args.M is not None else next_pow2_at_least(
            8 * args.R * args.N)
        rep = verify_tail_shift(args.N, args.R, m, trials=args.trials,
                                rng=rng, seed=seed)
    else:  # real-lemmas
        _require(args, ["N", "M", "k"], "verify real-lemmas")
        if args.oracle:
            f = _load_oracle(args.oracle, StepFunctionR)
        elif args.random_step is not None:
            period = _parse_fraction(args.random_step, "--random-step")
            f = random_step_function(period, args.value_bits, rng, d=args.d)
        elif args.square_wave is not None:
            f = _square_wave(_parse_fraction(args.square_wave, "--square-wave"))
        else:
            raise CliError(
                "verify real-lemmas requires --square-wave, --random-step or "
                "--oracle", EXIT_USAGE)
        t = _parse_fraction(args.t, "--t")
        rep = verify_real_lemmas(f, args.M, args.N, args.k, t, d=args.d,
                                 seed=seed)
    if args.format == "csv":
        rows = [{"theorem": rep.theorem, "measured": rep.measured,
                 "bound": rep.bound, "margin": rep.margin, "pass": rep.ok,
                 "seed": rep.seed, "params": rep.params_dict}]
        return rows, EXIT_OK if rep.ok else EXIT_ALGORITHM
    return [json.loads(rep.to_json())], EXIT_OK if rep.ok else EXIT_ALGORITHM


# ---------------------------------------------------------------------------
# Parser assembly.


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourierlab",
        description="Simulation laboratory for Fourier transforms over "
                    "cyclic groups and abelian hidden-subgroup algorithms.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qft-exact", help="exact transform circuit over Z_2^n")
    p.add_argument("--n", type=int, required=True,
                   help="register width, n >= 1; gate count is n(n+1)/2")
    p.add_argument("--emit-matrix", action="store_true",
                   help="emit the full 2^n x 2^n matrix (CSV; needs n <= 10)")
    _add_io(p)
    p.set_defaults(handler=cmd_qft_exact, seed=None)

    p = sub.add_parser("qft-aqft", help="rotation-truncated transform circuit")
    p.add_argument("--n", type=int, required=True, help="register width, n >= 1")
    p.add_argument("--kmax", type=int, required=True,
                   help="highest kept rotation order, 2 <= kmax <= n")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_qft_aqft)

    p = sub.add_parser("qft-parallel",
                       help="shallow shift-wrapped transform runs")
    p.add_argument("--n", type=int, required=True,
                   help="register width; 2k must divide n")
    p.add_argument("--k", type=int, required=True,
                   help="estimation window half-size, k >= 1, 2k | n")
    p.add_argument("--trials", type=int, default=1,
                   help="number of shifted runs (default 1)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_qft_parallel)

    p = sub.add_parser("qft-modn",
                       help="repetition-route transform over any modulus")
    p.add_argument("--modulus", type=int, required=True, help="target N >= 2")
    p.add_argument("--reps", type=int, required=True,
                   help="repetition count R, a power of 2")
    p.add_argument("--working", type=int,
                   help="working length M, a power of 2 with M >= R*N")
    p.add_argument("--auto-m", metavar="eps=VAL",
                   help="derive M as the smallest power of 2 giving joint "
                        "bound <= eps (requires the repetition floor "
                        "8 log2(N)/sqrt(R) < eps)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_qft_modn)

    p = sub.add_parser("qft-chirpz",
                       help="chirped-convolution transform attempts")
    p.add_argument("--modulus", type=int, required=True, help="target N >= 2")
    p.add_argument("--eps", type=float, required=True,
                   help="accuracy target in (0, 1]")
    p.add_argument("--trials", type=int, default=1,
                   help="attempts (default 1); exit 1 if none succeeds")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_qft_chirpz)

    p = sub.add_parser("qft-smooth",
                       help="exact transform via coprime factor split")
    p.add_argument("--modulus", type=int, required=True,
                   help="target N >= 1 (any N; cost follows its largest "
                        "prime-power factor)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_qft_smooth)

    p = sub.add_parser("eig-est",
                       help="phase estimation on the +1 mod N shift")
    p.add_argument("--modulus", type=int, required=True, help="N >= 2")
    p.add_argument("--k-bits", type=int, required=True,
                   help="control register width, k >= 1")
    p.add_argument("--index", type=int, required=True,
                   help="eigenvector index, 0 <= index < N")
    p.add_argument("--trials", type=int, default=1,
                   help="measurements to draw (default 1)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_eig_est)

    p = sub.add_parser("sample-known",
                       help="Fourier sampling at a known modulus")
    p.add_argument("--modulus", type=int, required=True,
                   help="state dimension N >= 2; the input is a seeded "
                        "random unit vector")
    p.add_argument("--reps", type=int, required=True,
                   help="repetition count R, a power of 2")
    p.add_argument("--working", type=int, required=True,
                   help="working length M, a power of 2 with M >= R*N")
    p.add_argument("--count", type=int, required=True,
                   help="number of draws, count >= 1")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_sample_known)

    p = sub.add_parser("sample-unknown",
                       help="Fourier sampling of an unknown period")
    p.add_argument("--period", type=int, required=True,
                   help="hidden period p >= 1 (a seeded residue class "
                        "indicator is tiled to the working register)")
    p.add_argument("--bound", type=int, required=True,
                   help="denominator bound T with p < T")
    p.add_argument("--working", type=int, required=True,
                   help="working length M >= period")
    p.add_argument("--count", type=int, required=True,
                   help="number of draws, count >= 1")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_sample_unknown)

    p = sub.add_parser("simon", help="xor-mask recovery over n-bit strings")
    p.add_argument("--n", type=int, required=True,
                   help="string width, n >= 1 (must match --oracle if given)")
    p.add_argument("--oracle", metavar="FILE",
                   help="oracle file (simon kind); omitted: a fresh seeded "
                        "oracle with a random mask")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_simon)

    p = sub.add_parser("hsp",
                       help="hidden subgroup of a finite abelian group")
    p.add_argument("--orders", metavar="p1,p2,...",
                   help="cyclic factor orders, each >= 2 (required unless "
                        "--oracle is given)")
    p.add_argument("--subgroup", metavar="GENS",
                   help="hidden subgroup generators 'c1 c2 ...;c1 c2 ...' "
                        "(omitted: one seeded random generator)")
    p.add_argument("--oracle", metavar="FILE",
                   help="oracle file (abelian kind)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_hsp)

    p = sub.add_parser("hsp-relaxed",
                       help="hidden subgroup from a d-separated oracle")
    p.add_argument("--orders", metavar="p1,p2,...",
                   help="cyclic factor orders, each >= 2 (required unless "
                        "--oracle is given)")
    p.add_argument("--subgroup", metavar="GENS",
                   help="hidden subgroup generators 'c1 c2 ...;c1 c2 ...' "
                        "(omitted: one seeded random generator)")
    p.add_argument("--oracle", metavar="FILE",
                   help="oracle file (abelian kind)")
    p.add_argument("--d", type=int, required=True,
                   help="separation parameter d >= 2 (oracle stays within "
                        "1/d of no rival coset structure)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_hsp_relaxed)

    p = sub.add_parser("period-z", help="period finding over the integers")
    p.add_argument("--bound", type=int, required=True,
                   help="strict upper bound on the period, bound >= 2")
    p.add_argument("--period", type=int,
                   help="true period for a generated oracle (required "
                        "unless --oracle is given); period < bound")
    p.add_argument("--relaxed-d", type=int,
                   help="generate/solve in d-separated mode, d >= 2")
    p.add_argument("--working", type=int,
                   help="working register, a power of 2 above the period "
                        "(default: bound^2 log^2 bound rounded up)")
    p.add_argument("--samples", type=int,
                   help="frequency samples to draw (default 32, or "
                        "log^2(bound) d^2 in relaxed mode)")
    p.add_argument("--oracle", metavar="FILE",
                   help="oracle file (periodic_z kind)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_period_z)

    p = sub.add_parser("period-r", help="period finding over the reals")
    p.add_argument("--period", metavar="FRAC",
                   help="rational period like 5/2 (required unless --oracle "
                        "is given); 2^k period must stay below 2^n")
    p.add_argument("--n", type=int, required=True,
                   help="period bound bits: period < 2^n after rescaling")
    p.add_argument("--k", type=int, required=True,
                   help="accuracy bits k >= 0 (the function is rescaled by "
                        "2^k internally)")
    p.add_argument("--m", type=int, required=True,
                   help="leading bits to recover, m >= 1")
    p.add_argument("--grid-m", type=int,
                   help="sampling rate M, a power of 2")
    p.add_argument("--grid-n", type=int,
                   help="grid length N, a power of 2 with N > M")
    p.add_argument("--desk-scale", action="store_true",
                   help="named policy: grid M = 2^8, N = 2^12 (the tuned "
                        "desk-scale pair)")
    p.add_argument("--samples", type=int, default=32,
                   help="frequency samples to draw (default 32)")
    p.add_argument("--value-bits", type=int, default=4,
                   help="value depth of the generated step function "
                        "(default 4, needs >= 2)")
    p.add_argument("--d", type=int, default=3,
                   help="separation certificate for the generated function "
                        "(default 3)")
    p.add_argument("--oracle", metavar="FILE",
                   help="oracle file (step_r kind)")
    _add_seed(p)
    _add_io(p)
    p.set_defaults(handler=cmd_period_r)

    p = sub.add_parser("verify",
                       help="check one quantitative bound, one line out")
    p.add_argument("theorem", choices=THEOREMS,
                   help="which bound to check")
    p.add_argument("--N", type=int, help="base modulus N")
    p.add_argument("--M", type=int,
                   help="working length M (fsl/pointmass/circulant: "
                        "required; ftt/tail-shift default next_pow2(8RN); "
                        "ftts default RN+17N; real-lemmas: sampling rate)")
    p.add_argument("--R", type=int, help="repetition count R")
    p.add_argument("--k", type=int,
                   help="real-lemmas tail divisor, k >= 1 and k | N")
    p.add_argument("--t", default="0",
                   help="real-lemmas rate offset, rational >= 0 (default 0)")
    p.add_argument("--d", type=int, default=2,
                   help="real-lemmas separation class (default 2)")
    p.add_argument("--trials", type=int, default=20,
                   help="random vectors for the sampled checks (default 20)")
    p.add_argument("--square-wave", metavar="FRAC",
                   help="real-lemmas input: square wave of this period")
    p.add_argument("--random-step", metavar="FRAC",
                   help="real-lemmas input: seeded random step function of "
                        "this period (certified to separation --d)")
    p.add_argument("--value-bits", type=int, default=4,
                   help="value depth for --random-step (default 4)")
    p.add_argument("--oracle", metavar="FILE",
                   help="real-lemmas input: oracle file (step_r kind)")
    _add_seed(p, required=False)
    _add_io(p)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rows, code = args.handler(args)
    except CliError as e:
        sys.stderr.write(json.dumps({"error": str(e)}) + "\n")
        return e.code
    except RetrySignal as e:
        sys.stderr.write(json.dumps({"error": str(e)}) + "\n")
        return EXIT_ALGORITHM
    except ValueError as e:
        sys.stderr.write(json.dumps({"error": str(e)}) + "\n")
        return EXIT_USAGE
    fmt = args.format
    if getattr(args, "emit_matrix", False) and fmt == "json":
        fmt = "csv"
    _emit(_render(rows, fmt), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
