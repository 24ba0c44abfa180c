"""Command-line workbench for the shift-XOR ring automata.

Subcommands: evolve, parity, spectrum, lz, verify, bench, scenario.
Exit codes: 0 on success, 1 when a verification or classification
invariant fails, 2 on usage errors.  Diagnostics go to stderr; data goes
to stdout or to files under --out.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

from . import experiments, io_formats
from .complexity import complexity_trace, detect_plateaus, expected_change_points
from .core import Configuration, UnsupportedSizeError
from .engine import (
    EvolutionRun,
    RuleParams,
    evolve_trace,
    fast_evolve,
    poly_evolve,
    step,
    step_packed,
)
from .parity_problem import NonUniformReadoutError, classify
from .spectral import spectrum_trace


class UsageError(Exception):
    """Invalid invocation detected after argument parsing."""


def _add_common(p: argparse.ArgumentParser, steps_required: bool = False):
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("-N", "--size", type=int, help="ring size (any positive integer)")
    size.add_argument("-n", "--log2-size", type=int, help="ring size exponent: N = 2**n")
    p.add_argument("--r", type=int, default=1, help="shift distance of the rule")
    p.add_argument("-t", "--steps", type=int, required=steps_required,
                   help="number of time steps")
    p.add_argument("--seed", type=int, default=0, help="seed for random inits")
    p.add_argument("--init", default="random",
                   help="random-odd | random | single-one | literal:<bits> | file:<path>")
    p.add_argument("--out", type=Path, help="directory for artifact files")
    p.add_argument("--format", choices=("csv", "pbm", "json"), default=None,
                   help="artifact format where a choice applies")


def _resolve_size(args) -> int:
    if args.size is not None:
        if args.size < 1:
            raise UsageError("--size must be >= 1")
        return args.size
    if args.log2_size < 1:
        raise UsageError("--log2-size must be >= 1")
    return 1 << args.log2_size


def _initial(args, size: int) -> Configuration:
    kind, _, arg = args.init.partition(":")
    if kind == "random":
        return experiments.random_config(size, args.seed)
    if kind == "random-odd":
        return experiments.random_config(size, args.seed, force_odd=True)
    if kind == "single-one":
        return Configuration.single_one(size)
    if kind == "literal":
        c = Configuration.from_string(arg)
    elif kind == "file":
        try:
            c = Configuration.from_string(Path(arg).read_text())
        except OSError as e:
            raise UsageError(f"cannot read init file: {e}")
    else:
        raise UsageError(f"unknown --init {args.init!r}")
    if c.size != size:
        raise UsageError(f"init literal has {c.size} cells, expected {size}")
    return c


def _out_path(args, filename: str) -> Path:
    args.out.mkdir(parents=True, exist_ok=True)
    return args.out / filename


# -- subcommands ---------------------------------------------------------


def _cmd_evolve(args) -> int:
    size = _resolve_size(args)
    steps = args.steps if args.steps is not None else size - 1
    if steps < 0:
        raise UsageError("--steps must be >= 0")
    c = _initial(args, size)
    rule = RuleParams(args.r)
    if args.out:
        fmt = args.format or "pbm"
        if fmt == "csv":
            raise UsageError("evolve emits pbm or json artifacts, not csv")
        run = evolve_trace(c, rule, steps)
        if fmt == "pbm":
            img = io_formats.SpaceTimeImage.from_run(run)
            _out_path(args, "spacetime.pbm").write_bytes(io_formats.emit_pbm(img))
        else:
            _out_path(args, "run.bin").write_bytes(io_formats.save_run(run))
        final = run.snapshots[steps]
    else:
        final = fast_evolve(c, rule, steps)
    print(final.to_string())
    return 0


def _cmd_parity(args) -> int:
    size = _resolve_size(args)
    c = _initial(args, size)
    verdict = classify(c, RuleParams(args.r))
    if args.format == "json":
        print(json.dumps({
            "parity": verdict.answer,
            "decided_at": verdict.decided_at,
            "mode": verdict.mode,
            "uniform": verdict.uniform,
        }, sort_keys=True))
    else:
        print(f"parity={verdict.answer} decided_at={verdict.decided_at}")
    return 0


def _cmd_spectrum(args) -> int:
    size = _resolve_size(args)
    times = sorted({int(t) for t in args.at.split(",")} if args.at else {0})
    if any(t < 0 for t in times):
        raise UsageError("--at times must be >= 0")
    c = _initial(args, size)
    run = EvolutionRun(RuleParams(args.r), c, max(times))
    blob = io_formats.spectra_csv(spectrum_trace(run, times))
    if args.out:
        _out_path(args, "spectrum.csv").write_bytes(blob)
    else:
        sys.stdout.write(blob.decode("ascii"))
    return 0


def _cmd_lz(args) -> int:
    size = _resolve_size(args)
    steps = args.steps if args.steps is not None else size - 1
    c = _initial(args, size)
    run = evolve_trace(c, RuleParams(args.r), steps)
    trace = complexity_trace(run)
    trace_blob = io_formats.trace_csv(trace)
    plateau_blob = None
    if args.plateaus:
        if size & (size - 1) == 0:
            report = detect_plateaus(trace, expected_change_points(size))
        else:
            report = detect_plateaus(trace)
        plateau_blob = (json.dumps({
            "schema_version": experiments.REPORT_SCHEMA_VERSION,
            "intervals": [vars(iv) for iv in report.intervals],
        }, indent=2, sort_keys=True) + "\n").encode("ascii")
    if args.out:
        _out_path(args, "lz.csv").write_bytes(trace_blob)
        if plateau_blob:
            _out_path(args, "plateaus.json").write_bytes(plateau_blob)
    elif plateau_blob:
        sys.stdout.write(plateau_blob.decode("ascii"))
    else:
        sys.stdout.write(trace_blob.decode("ascii"))
    return 0


def _parse_sizes(spec: str) -> list[int]:
    out: list[int] = []
    for part in spec.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _cmd_verify(args) -> int:
    sizes = _parse_sizes(args.sizes)
    report = experiments.verify_all(sizes, samples=args.samples, seed=args.seed)
    text = report.to_json()
    if args.out:
        _out_path(args, "verify.json").write_text(text)
    print(text, end="")
    if not report.passed:
        print("verification failed:", file=sys.stderr)
        for check in report.checks:
            if not check.passed:
                print(f"  {check.name}: worst={check.worst}", file=sys.stderr)
        return 1
    return 0


_BENCH_BACKENDS = ("naive", "packed", "jump", "poly")


def _cmd_bench(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    backends = args.backends.split(",") if args.backends else list(_BENCH_BACKENDS)
    unknown = set(backends) - set(_BENCH_BACKENDS)
    if unknown:
        raise UsageError(f"unknown backends: {sorted(unknown)}")
    size = _resolve_size(args)
    steps = args.steps if args.steps is not None else 1024
    if steps < 1:
        raise UsageError("--steps must be >= 1 for bench")
    c = _initial(args, size)
    report = bench(backends, c, RuleParams(args.r), steps, args.reps)
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for name in backends:
            entry = report["backends"][name]
            print(f"{name:>7}: {entry['seconds']:.6f} s  "
                  f"{entry['cell_steps_per_second']:.3e} cell-steps/s")
        print(f"outputs-agree: {report['outputs_agree']}")
        for w in report["warnings"]:
            print(f"warning: {w}")
    return 0 if report["outputs_agree"] else 1


def bench(backends: list[str], c: Configuration, rule: RuleParams,
          steps: int, reps: int) -> dict:
    """Median wall time per backend for a t-step evolution, plus an
    output-equality check across the benchmarked backends."""
    runners = {
        "naive": lambda: _iterate(step, c, rule, steps),
        "packed": lambda: _iterate(step_packed, c, rule, steps),
        "jump": lambda: fast_evolve(c, rule, steps),
        "poly": lambda: poly_evolve(c, rule, steps),
    }
    results: dict[str, Configuration] = {}
    entries = {}
    for name in backends:
        times = []
        for _ in range(reps):
            start = time.perf_counter()
            results[name] = runners[name]()
            times.append(time.perf_counter() - start)
        med = statistics.median(times)
        entries[name] = {
            "seconds": med,
            "cell_steps_per_second": c.size * steps / med if med > 0 else float("inf"),
        }
    outputs = list(results.values())
    agree = all(o == outputs[0] for o in outputs)
    warnings = []
    if "naive" in entries:
        base = entries["naive"]["seconds"]
        for name in ("packed", "jump"):
            if name in entries and entries[name]["seconds"] * 5 > base:
                ratio = base / entries[name]["seconds"]
                warnings.append(
                    f"{name} backend only {ratio:.1f}x naive throughput (expected >= 5x)"
                )
    return {
        "schema_version": experiments.REPORT_SCHEMA_VERSION,
        "size": c.size,
        "r": rule.r,
        "steps": steps,
        "reps": reps,
        "backends": entries,
        "outputs_agree": agree,
        "warnings": warnings,
    }


def _iterate(step_fn, c: Configuration, rule: RuleParams, steps: int) -> Configuration:
    for _ in range(steps):
        c = step_fn(c, rule)
    return c


def _cmd_scenario(args) -> int:
    try:
        text = args.file.read_text()
    except OSError as e:
        raise UsageError(f"cannot read scenario file: {e}")
    scenario = experiments.parse_scenario(text, name=args.file.stem)
    report = experiments.run_scenario(scenario, out_dir=args.out)
    print(report.to_json(), end="")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorca",
        description="Shift-XOR ring automata: evolution, parity classification, "
                    "spectra, LZ78 complexity, verification and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="evolve a configuration, print the final literal")
    _add_common(p)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("parity", help="classify a configuration by its parity")
    _add_common(p)
    p.set_defaults(fn=_cmd_parity)

    p = sub.add_parser("spectrum", help="power spectra at chosen time steps (CSV)")
    _add_common(p)
    p.add_argument("--at", help="comma-separated time steps, default 0")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("lz", help="LZ78 complexity trace (CSV), optional plateaus")
    _add_common(p)
    p.add_argument("--plateaus", action="store_true", help="also segment into plateaus")
    p.set_defaults(fn=_cmd_lz)

    p = sub.add_parser("verify", help="run every invariant suite, report JSON")
    p.add_argument("--sizes", default="3-6",
                   help="ring size exponents, e.g. 3-8 or 3,5,7")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("bench", help="time the evolution backends")
    _add_common(p)
    p.add_argument("--backends", help=f"comma-separated subset of {_BENCH_BACKENDS}")
    p.add_argument("--reps", type=int, default=3, help="repetitions; median reported")
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("scenario", help="run a key=value scenario file")
    p.add_argument("file", type=Path)
    p.add_argument("--out", type=Path, help="override the scenario's out-dir")
    p.set_defaults(fn=_cmd_scenario)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, UnsupportedSizeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NonUniformReadoutError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
