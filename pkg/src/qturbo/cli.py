"""Command-line front end.

Subcommands:

    codes       print the code constructions and their seed encodings
    verify      replay the built-in reference vectors; exit 1 on mismatch
    simulate    Monte-Carlo QBER sweep -> CSV (+ resumable manifest)
    exit        decoder transfer curves -> CSV
    trajectory  per-iteration decoder information trace -> CSV
    analyze     sweeps -> goodput CSV, bound-curve CSV, switch tables

Every output CSV starts with a provenance comment

    # qturbo <version> config=<hash> seed=<seed>

and all numbers are pure functions of (config, master seed): worker
count and scheduling never change a byte.  `--threads` (or the
QTURBO_THREADS environment variable) sets the worker pool; `--seed`,
`--out`, and `--config` override the corresponding config fields.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, pauli, reference_data
from .bounds import (
    BEAT_UNCODED,
    SwitchTable,
    goodput,
    hashing_capacity,
    switching_points,
    target_requirement,
)
from .channel import channel_prior
from .config import RunConfig, config_hash, load_config, override
from .exit_chart import (
    inner_exit_curve,
    outer_exit_curve,
    record_trajectory,
)
from .pipeline import (
    SchemeConfig,
    StopRule,
    SweepRecord,
    compile_scheme,
    decode_frame,
    decompose_blocks,
    deinterleave,
    run_point,
)
from .qsbc import build_qsbc
from .qurc import build_qurc, check_non_catastrophic, propagate_inverse
from .symplectic import compile_gates, conjugate, is_symplectic, seed_encode

SWEEP_COLUMNS = (
    "rate,k,p,frames,qubit_errors,qubit_total,qber,ci_low,ci_high,mean_iterations"
)
EXIT_COLUMNS = "curve,p_or_rate,I_A,I_E,I_A_norm,I_E_norm,samples"
TRAJECTORY_COLUMNS = "iteration,stage,I,I_norm"
GOODPUT_COLUMNS = "rate,p,qber,goodput"
BOUND_COLUMNS = "p,capacity"

INNER_CURVE_P = (0.06, 0.05, 0.04, 0.03, 0.02, 0.01)
OUTER_CURVE_RATES = (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4))


def _provenance(cfg_hash: str, seed: int) -> str:
    return f"# qturbo {__version__} config={cfg_hash} seed={seed}"


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _param_hash(*parts) -> str:
    """Provenance hash for subcommands not driven by a RunConfig."""
    blob = ";".join(repr(part) for part in parts)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

def _gate_name(gate) -> str:
    if hasattr(gate, "control"):
        return f"CNOT({gate.control},{gate.target})"
    return f"H({gate.qubit})"


def _seed_str(seed) -> str:
    return "{" + ", ".join(str(v) for v in seed) + "}"


def cmd_codes(out_dir: Path | None = None) -> str:
    """Human-readable construction report; codes.json beside it if asked."""
    lines = []
    payload: dict = {"outer_codes": [], "inner_code": {}, "reference_seeds": {}}
    for k in sorted(reference_data.QSBC_SEEDS):
        code = build_qsbc(k)
        seed = seed_encode(code.encoder)
        assert tuple(seed) == reference_data.QSBC_SEEDS[k]
        pcm_rows = ["".join(str(b) for b in row) for row in code.pcm]
        stabs = [s.to_string() for s in code.stabilizers]
        gates = " ".join(_gate_name(g) for g in code.gates)
        lines += [
            f"C[{code.n},{code.k},2]  rate {Fraction(code.k, code.n)}",
            f"  parity checks : {pcm_rows[0]} / {pcm_rows[1]}",
            f"  stabilizers   : {stabs[0]}, {stabs[1]}",
            f"  encoder gates : {gates}",
            f"  seed          : {_seed_str(seed)}",
            "",
        ]
        payload["outer_codes"].append(
            {"n": code.n, "k": code.k, "pcm": pcm_rows, "stabilizers": stabs,
             "gates": gates.split(), "seed": list(seed)}
        )
    spec = build_qurc()
    lines += [
        "Unity-rate inner code (3 qubits: memory 1-2, frame 3)",
        f"  seed          : {_seed_str(reference_data.QURC_SEED)}",
        f"  symplectic    : {is_symplectic(spec.transform)}",
        f"  non-catastrophic forward machine: {check_non_catastrophic(spec.trellis)}",
        "",
        "Irregular-convolutional reference seeds (data only, not simulated):",
    ]
    payload["inner_code"] = {
        "seed": list(reference_data.QURC_SEED),
        "symplectic": is_symplectic(spec.transform),
        "non_catastrophic": check_non_catastrophic(spec.trellis),
    }
    for rate, seed in reference_data.QIRCC_REFERENCE_SEEDS.items():
        lines.append(f"  rate {rate:>3} : {_seed_str(seed)}")
        payload["reference_seeds"][rate] = list(seed)
    report = "\n".join(lines) + "\n"
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_text(out_dir / "codes.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return report


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check_build_stages() -> tuple[bool, str]:
    from .qsbc import qsbc_gate_list

    gates = qsbc_gate_list(2)
    stages = reference_data.QSBC2_BUILD_STAGES
    if len(stages) != len(gates) + 1:
        return False, f"expected {len(gates) + 1} stages, reference lists {len(stages)}"
    for i in range(len(gates) + 1):
        got = tuple(seed_encode(compile_gates(gates[:i], 4)))
        if got != stages[i]:
            return False, f"stage {i}: built {got}, reference {stages[i]}"
    return True, f"all {len(stages)} build stages bit-exact"


def _check_conjugation() -> tuple[bool, str]:
    from .qsbc import qsbc_gate_list

    src, expected = reference_data.CONJUGATION_EXAMPLE
    encoder = compile_gates(qsbc_gate_list(2), 4)
    got = conjugate(pauli.from_string(src), encoder).to_string()
    if got != expected:
        return False, f"{src} conjugated to {got}, reference {expected}"
    return True, f"{src} -> {expected}"


def _check_outer_seeds() -> tuple[bool, str]:
    for k, expected in sorted(reference_data.QSBC_SEEDS.items()):
        code = build_qsbc(k)
        got = tuple(seed_encode(code.encoder))
        if got != tuple(expected):
            return False, f"k={k}: built {got}, reference {tuple(expected)}"
        if not is_symplectic(code.encoder):
            return False, f"k={k}: encoder is not symplectic"
    return True, f"{len(reference_data.QSBC_SEEDS)} outer seeds bit-exact and symplectic"


def _check_inner_seed() -> tuple[bool, str]:
    spec = build_qurc(seed=reference_data.QURC_SEED)
    if not is_symplectic(spec.transform):
        return False, "inner seed does not decode to a symplectic transform"
    if not check_non_catastrophic(spec.trellis):
        return False, "inner forward machine is catastrophic"
    return True, "inner seed symplectic, forward machine non-catastrophic"


def _check_tiny_end_to_end() -> tuple[bool, str]:
    """Canonical tiny instance: X on frame 2 vs brute-force class MAP.

    On the one-block k=2 scheme at p=0.1 the physical error X applied to
    frame 2 (frames counted from 1) is decoded by the full iterative
    pipeline.  The result must equal the maximum-a-posteriori logical
    class computed by direct enumeration of all 4^4 physical patterns,
    conditioned on the observed syndrome.
    """
    cfg = SchemeConfig(rate=Fraction(1, 2), k=2)
    scheme = compile_scheme(cfg)
    N = scheme.n_total
    p = 0.1
    prior = channel_prior(p)

    shifts = 2 * np.arange(N - 1, -1, -1)
    digits = ((np.arange(4 ** N)[:, None] >> shifts[None, :]) & 3).astype(np.uint8)
    probs = prior[digits].prod(axis=1)

    cls_of = np.empty(4 ** N, dtype=np.int64)
    syn_of = np.empty(4 ** N, dtype=np.int64)
    for idx in range(4 ** N):
        inner_true = propagate_inverse(scheme.qurc, digits[idx])
        outer_true = deinterleave(scheme.interleaver, inner_true)
        logical, syn = decompose_blocks(scheme.code, outer_true.reshape(1, N))
        cls_of[idx] = logical[0, 0] * 4 + logical[0, 1]
        syn_of[idx] = syn[0]

    posterior = np.zeros((4, 16))
    np.add.at(posterior, (syn_of, cls_of), probs)

    e_phys = np.zeros(N, dtype=np.uint8)
    e_phys[1] = 1  # X on frame 2, frames counted from 1
    idx = int((e_phys.astype(np.int64) << shifts).sum())
    map_class = int(posterior[syn_of[idx]].argmax())

    result = decode_frame(scheme, p, e_phys)
    sym = result.decoded_logical.symbol_indices()
    got = int(sym[0]) * 4 + int(sym[1])
    if got != map_class:
        return False, (
            f"X-on-frame-2 decoded class {got}, brute-force MAP {map_class}"
        )
    return True, (
        f"X-on-frame-2 decodes to class {got}, matching brute-force MAP "
        f"over all {4 ** N} patterns"
    )


VERIFY_CHECKS = (
    ("encoder-build-stages", _check_build_stages),
    ("conjugation-example", _check_conjugation),
    ("outer-seed-table", _check_outer_seeds),
    ("inner-seed", _check_inner_seed),
    ("tiny-end-to-end", _check_tiny_end_to_end),
)


def cmd_verify() -> tuple[bool, str]:
    """Run every reference check; (all_passed, printable report)."""
    lines = []
    all_ok = True
    for name, check in VERIFY_CHECKS:
        ok, detail = check()
        all_ok &= ok
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    lines.append("verify: " + ("all checks passed" if all_ok else "MISMATCH"))
    return all_ok, "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _record_to_row(record: SweepRecord) -> str:
    return ",".join(
        [
            str(record.rate),
            str(record.k),
            repr(record.p),
            str(record.frames),
            str(record.qubit_errors),
            str(record.qubit_total),
            repr(record.qber),
            repr(record.ci_low),
            repr(record.ci_high),
            repr(record.mean_iterations),
        ]
    )


def _record_from_dict(data: dict) -> SweepRecord:
    return SweepRecord(
        rate=Fraction(data["rate"]),
        k=int(data["k"]),
        p=float(data["p"]),
        frames=int(data["frames"]),
        qubit_errors=int(data["qubit_errors"]),
        qubit_total=int(data["qubit_total"]),
        qber=float(data["qber"]),
        ci_low=float(data["ci_low"]),
        ci_high=float(data["ci_high"]),
        mean_iterations=float(data["mean_iterations"]),
    )


def _record_to_dict(record: SweepRecord) -> dict:
    return {
        "rate": str(record.rate),
        "k": record.k,
        "p": record.p,
        "frames": record.frames,
        "qubit_errors": record.qubit_errors,
        "qubit_total": record.qubit_total,
        "qber": record.qber,
        "ci_low": record.ci_low,
        "ci_high": record.ci_high,
        "mean_iterations": record.mean_iterations,
    }


def sweep_csv_name(rate: Fraction, k: int) -> str:
    return f"sweep_r{rate.numerator}-{rate.denominator}_k{k}.csv"


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    """Parse a sweep CSV (comment and header lines skipped)."""
    records = []
    header = SWEEP_COLUMNS.split(",")
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("rate,"):
            continue
        values = line.split(",")
        if len(values) != len(header):
            raise ValueError(f"{path}: malformed row {line!r}")
        records.append(_record_from_dict(dict(zip(header, values))))
    return records


def cmd_simulate(config: RunConfig, progress=None) -> Path:
    """Run (or resume) the configured sweep; returns the CSV path.

    Completed points are stored in `manifest.json` next to the CSV,
    keyed by the config hash: re-running the same configuration skips
    finished points, a changed configuration starts fresh.  The CSV is
    rewritten from the manifest after every point, rows in p order.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg_hash = config_hash(config)
    manifest_path = out_dir / "manifest.json"
    csv_path = out_dir / sweep_csv_name(config.rate, config.k)

    points: dict[str, dict] = {}
    if manifest_path.exists():
        stored = json.loads(manifest_path.read_text())
        if stored.get("config") == cfg_hash:
            points = stored.get("points", {})

    scheme_config = SchemeConfig(
        rate=config.rate,
        k=config.k,
        iterations=config.iterations,
        early_stop=config.early_stop,
        interleaver_seed=config.interleaver_seed,
        memory_last=config.memory_last,
    )
    stop_rule = StopRule(
        target_errors=config.target_errors, max_frames=config.max_frames
    )
    scheme = None  # compiled lazily: a fully resumed sweep never builds it

    def flush() -> None:
        manifest = {
            "version": __version__,
            "config": cfg_hash,
            "seed": config.master_seed,
            "points": points,
        }
        _write_text(manifest_path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        rows = [
            _record_to_row(_record_from_dict(points[key]))
            for key in (repr(p) for p in config.p_list)
            if key in points
        ]
        body = "\n".join([SWEEP_COLUMNS] + rows) + "\n"
        _write_text(
            csv_path, _provenance(cfg_hash, config.master_seed) + "\n" + body
        )

    for index, p in enumerate(config.p_list):
        key = repr(p)
        if key in points:
            continue
        if scheme is None:
            scheme = compile_scheme(scheme_config)
        record = run_point(
            scheme, p, stop_rule, config.master_seed, index, workers=config.workers
        )
        points[key] = _record_to_dict(record)
        flush()
        if progress is not None:
            progress(record)
    flush()
    return csv_path


# ---------------------------------------------------------------------------
# exit / trajectory
# ---------------------------------------------------------------------------

def cmd_exit(
    out_dir: Path,
    samples: int = 100_000,
    master_seed: int = 0,
    grid_points: int = 11,
    inner_p: tuple[float, ...] = INNER_CURVE_P,
    outer_rates: tuple[Fraction, ...] = OUTER_CURVE_RATES,
) -> Path:
    """Transfer curves for the inner decoder at each channel level and
    for each outer code; one combined CSV."""
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.0, 2.0, grid_points)
    cfg_hash = _param_hash("exit", samples, master_seed, grid_points, inner_p, outer_rates)
    rows = []
    for tag, p in enumerate(inner_p):
        points = inner_exit_curve(
            p, grid, samples, master_seed=master_seed, stream_tag=100 + tag
        )
        rows += [
            f"inner,{p!r},{pt.I_A!r},{pt.I_E!r},{pt.I_A / 2!r},{pt.I_E / 2!r},{pt.samples}"
            for pt in points
        ]
    for tag, rate in enumerate(outer_rates):
        points = outer_exit_curve(
            rate, grid, samples, master_seed=master_seed, stream_tag=200 + tag
        )
        rows += [
            f"outer,{rate},{pt.I_A!r},{pt.I_E!r},{pt.I_A / 2!r},{pt.I_E / 2!r},{pt.samples}"
            for pt in points
        ]
    path = out_dir / "exit_curves.csv"
    body = "\n".join([EXIT_COLUMNS] + rows) + "\n"
    _write_text(path, _provenance(cfg_hash, master_seed) + "\n" + body)
    return path


def cmd_trajectory(
    out_dir: Path,
    rate: Fraction = Fraction(1, 2),
    k: int = 500,
    p: float = 0.045,
    iterations: int = 16,
    frames: int = 1,
    master_seed: int = 0,
) -> Path:
    """Iteration-by-iteration information trace of the live decoder."""
    out_dir.mkdir(parents=True, exist_ok=True)
    config = SchemeConfig(rate=rate, k=k, iterations=iterations)
    points = record_trajectory(config, p, frames=frames, master_seed=master_seed)
    cfg_hash = _param_hash("trajectory", str(rate), k, p, iterations, frames, master_seed)
    rows = [
        f"{pt.iteration},{pt.stage},{pt.I!r},{pt.I / 2!r}" for pt in points
    ]
    path = out_dir / "trajectory.csv"
    body = "\n".join([TRAJECTORY_COLUMNS] + rows) + "\n"
    _write_text(path, _provenance(cfg_hash, master_seed) + "\n" + body)
    return path


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _switch_table_payload(table: SwitchTable) -> dict:
    return {
        "requirement": table.requirement,
        "thresholds": {
            str(t.rate): t.threshold for t in table.thresholds
        },
        "intervals": [
            {"p_low": iv.p_low, "p_high": iv.p_high, "rate": str(iv.rate)}
            for iv in table.intervals
        ],
    }


def cmd_analyze(
    sweep_paths: list[Path],
    out_dir: Path,
    target: float = 1e-3,
    bound_max: float = 0.12,
) -> tuple[Path, Path, Path]:
    """Goodput per sweep point, the capacity curve, and switch tables
    for both requirements (beat-uncoded and qber <= target)."""
    records: list[SweepRecord] = []
    for path in sweep_paths:
        if not Path(path).exists():
            raise FileNotFoundError(f"sweep file not found: {path}")
        records += read_sweep_csv(path)
    if not records:
        raise ValueError("the given sweep files contain no data rows")
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg_hash = _param_hash(
        "analyze", tuple(sorted(str(p) for p in sweep_paths)), target, bound_max
    )

    records.sort(key=lambda r: (r.rate, r.k, r.p))
    goodput_rows = [
        f"{r.rate},{r.p!r},{r.qber!r},{goodput(r.rate, r.qber)!r}" for r in records
    ]
    goodput_path = out_dir / "goodput.csv"
    _write_text(
        goodput_path,
        _provenance(cfg_hash, 0) + "\n" + "\n".join([GOODPUT_COLUMNS] + goodput_rows) + "\n",
    )

    grid = [i / 1000.0 for i in range(int(round(bound_max * 1000)) + 1)]
    bound_rows = [f"{p!r},{hashing_capacity(p)!r}" for p in grid]
    bound_path = out_dir / "hashing_bound.csv"
    _write_text(
        bound_path,
        _provenance(cfg_hash, 0) + "\n" + "\n".join([BOUND_COLUMNS] + bound_rows) + "\n",
    )

    tables = [
        switching_points(records, BEAT_UNCODED),
        switching_points(records, target_requirement(target)),
    ]
    switch_path = out_dir / "switch_table.json"
    payload = {"requirements": [_switch_table_payload(t) for t in tables]}
    _write_text(switch_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return goodput_path, bound_path, switch_path


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _resolve_workers(flag: int | None, config_workers: int) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("QTURBO_THREADS")
    if env:
        return int(env)
    return config_workers


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qturbo",
        description="Simulator and analysis suite for concatenated "
        "short-block / unity-rate quantum codes on depolarizing channels.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration")
    common.add_argument("--seed", type=int, help="master seed override")
    common.add_argument("--threads", type=int, help="worker count override")
    common.add_argument("--out", type=Path, help="output directory override")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("codes", parents=[common], help="print code constructions")
    sub.add_parser("verify", parents=[common], help="replay reference vectors")
    sub.add_parser("simulate", parents=[common], help="run the configured QBER sweep")

    p_exit = sub.add_parser("exit", parents=[common], help="decoder transfer curves")
    p_exit.add_argument("--samples", type=int, default=100_000,
                        help="symbols per grid point (default 100000)")
    p_exit.add_argument("--grid", type=int, default=11,
                        help="a-priori grid points on [0, 2] (default 11)")

    p_traj = sub.add_parser("trajectory", parents=[common],
                            help="iteration-by-iteration information trace")
    p_traj.add_argument("--p", type=float, default=0.045)
    p_traj.add_argument("--rate", type=str, default=None,
                        help="outer rate, e.g. 1/2 (default: config)")
    p_traj.add_argument("--k", type=int, default=None)
    p_traj.add_argument("--frames", type=int, default=1,
                        help="frames averaged into the trace (default 1)")

    p_an = sub.add_parser("analyze", parents=[common],
                          help="goodput, capacity overlay, switch tables")
    p_an.add_argument("--sweep", type=Path, action="append", required=True,
                      help="sweep CSV (repeatable)")
    p_an.add_argument("--target", type=float, default=1e-3,
                      help="QBER target for the second switch table (default 1e-3)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ValueError, OSError) as err:
        # bad config values, unreadable/missing input files
        sys.stderr.write(f"error: {err}\n")
        return 2


def _dispatch(args) -> int:
    config = load_config(args.config) if args.config else RunConfig()
    config = override(
        config,
        master_seed=args.seed,
        out_dir=str(args.out) if args.out else None,
    )
    config = override(config, workers=_resolve_workers(args.threads, config.workers))

    if args.command == "codes":
        report = cmd_codes(Path(config.out_dir) if args.out else None)
        sys.stdout.write(report)
        return 0
    if args.command == "verify":
        ok, report = cmd_verify()
        sys.stdout.write(report)
        return 0 if ok else 1
    if args.command == "simulate":
        def progress(record):
            sys.stdout.write(
                f"p={record.p:g}: qber={record.qber:.3e} "
                f"({record.qubit_errors}/{record.qubit_total} over {record.frames} frames)\n"
            )
        path = cmd_simulate(config, progress=progress)
        sys.stdout.write(f"sweep written to {path}\n")
        return 0
    if args.command == "exit":
        path = cmd_exit(
            Path(config.out_dir),
            samples=args.samples,
            master_seed=config.master_seed,
            grid_points=args.grid,
        )
        sys.stdout.write(f"transfer curves written to {path}\n")
        return 0
    if args.command == "trajectory":
        rate = Fraction(args.rate) if args.rate else config.rate
        path = cmd_trajectory(
            Path(config.out_dir),
            rate=rate,
            k=args.k if args.k is not None else config.k,
            p=args.p,
            iterations=config.iterations,
            frames=args.frames,
            master_seed=config.master_seed,
        )
        sys.stdout.write(f"trajectory written to {path}\n")
        return 0
    if args.command == "analyze":
        paths = cmd_analyze(args.sweep, Path(config.out_dir), target=args.target)
        sys.stdout.write("analysis written to " + ", ".join(str(p) for p in paths) + "\n")
        return 0
    raise AssertionError(f"unhandled command {args.command}")  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
