"""Reproducible scenario runs and the aggregated verification suites.

Random initial configurations come from an in-repo SplitMix64 stream so
that a (size, seed) pair yields identical cells on every platform and
Python version; the generator is part of the artifact format contract
because golden files depend on it.  Scenarios bind an initial
configuration, a rule and a horizon to a set of analyses and emit their
artifacts deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io_formats
from .complexity import complexity_trace, detect_plateaus, expected_change_points
from .core import Configuration, parity, spatial_period, xor
from .engine import (
    RuleParams,
    evolve_trace,
    fast_evolve,
    poly_evolve,
    step,
    step_packed,
    window_sum_jump,
)
from .parity_problem import ParityVerdict, classify
from .spectral import (
    ZERO_POWER_EPS,
    check_even_zero_theorem,
    check_odd_zero_theorem,
    longest_period_from_spectrum,
    spectrum_trace,
)

REPORT_SCHEMA_VERSION = 1

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Fixed 64-bit mixing generator (Steele, Lea & Flood's SplitMix64).

    Chosen for the artifact because its output is a pure function of the
    seed with no platform- or version-dependent behaviour.  Stream
    quality is ample for fair coin flips.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_word(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def bits(self, count: int) -> int:
        """``count`` pseudorandom bits, bit i of the result from word i//64."""
        word = 0
        for chunk in range((count + 63) // 64):
            word |= self.next_word() << (64 * chunk)
        return word & ((1 << count) - 1)


def random_config(size: int, seed: int, force_odd: bool = False) -> Configuration:
    """Independent fair bits per cell, fully determined by (size, seed).

    With ``force_odd``, cell 0 is flipped when the drawn parity is even.
    """
    if size < 1:
        raise ValueError(f"ring size must be >= 1, got {size}")
    word = SplitMix64(seed).bits(size)
    if force_odd and word.bit_count() % 2 == 0:
        word ^= 1
    return Configuration.from_word(size, word)


# -- scenarios -----------------------------------------------------------

_ANALYSES = ("spacetime", "spectra-at", "lz-trace", "plateaus", "verdict")


@dataclass(frozen=True)
class Scenario:
    """One reproducible experiment: rule, seeded init, horizon, analyses."""

    name: str
    size: int
    r: int
    init: str  # random-odd | random | single-one | literal:<bits> | file:<path>
    seed: int = 0
    horizon: int = 0
    analyses: tuple[str, ...] = ()
    spectra_times: tuple[int, ...] = ()
    out_dir: str = "."

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"scenario size must be >= 1, got {self.size}")
        if self.horizon < 0:
            raise ValueError("scenario horizon must be >= 0")
        for a in self.analyses:
            if a not in _ANALYSES:
                raise ValueError(
                    f"unknown analysis {a!r}; expected one of {_ANALYSES}"
                )

    def initial_configuration(self) -> Configuration:
        kind, _, arg = self.init.partition(":")
        if kind == "random":
            return random_config(self.size, self.seed)
        if kind == "random-odd":
            return random_config(self.size, self.seed, force_odd=True)
        if kind == "single-one":
            return Configuration.single_one(self.size)
        if kind == "literal":
            c = Configuration.from_string(arg)
        elif kind == "file":
            c = Configuration.from_string(Path(arg).read_text())
        else:
            raise ValueError(f"unknown init spec {self.init!r}")
        if c.size != self.size:
            raise ValueError(
                f"init literal has {c.size} cells but the scenario declares {self.size}"
            )
        return c


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    """Parse the line-oriented key=value scenario format.

    Keys: name, size or n (log2 size), r, init, seed, horizon, analyses
    (comma/space separated; spectra times as ``spectra-at:t1:t2:...``),
    out-dir.  Blank lines and lines starting with '#' are ignored.
    """
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        fields[key.strip()] = value.strip()

    if "size" in fields and "n" in fields:
        raise ValueError("give either size= or n=, not both")
    if "size" in fields:
        size = int(fields["size"])
    elif "n" in fields:
        size = 1 << int(fields["n"])
    else:
        raise ValueError("scenario needs size= or n=")

    analyses: list[str] = []
    spectra_times: list[int] = []
    for token in fields.get("analyses", "").replace(",", " ").split():
        if token.startswith("spectra-at:"):
            analyses.append("spectra-at")
            spectra_times = [int(t) for t in token.split(":")[1:]]
        else:
            analyses.append(token)

    return Scenario(
        name=fields.get("name", name),
        size=size,
        r=int(fields.get("r", "1")),
        init=fields.get("init", "random"),
        seed=int(fields.get("seed", "0")),
        horizon=int(fields.get("horizon", "0")),
        analyses=tuple(analyses),
        spectra_times=tuple(spectra_times),
        out_dir=fields.get("out-dir", "."),
    )


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    worst: float = 0.0
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "worst": self.worst,
            "note": self.note,
        }


@dataclass
class RunReport:
    """Scenario echo, optional verdict, emitted artifacts, check results."""

    scenario: dict
    verdict: ParityVerdict | None = None
    artifacts: list[str] = field(default_factory=list)
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        out = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "scenario": self.scenario,
            "artifacts": self.artifacts,
            "checks": [c.as_dict() for c in self.checks],
            "passed": self.passed,
        }
        if self.verdict is not None:
            out["verdict"] = {
                "answer": self.verdict.answer,
                "decided_at": self.verdict.decided_at,
                "mode": self.verdict.mode,
                "uniform": self.verdict.uniform,
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def run_scenario(scenario: Scenario, out_dir: str | Path | None = None) -> RunReport:
    """Execute a scenario: evolve, run its analyses, write artifacts.

    Artifact files land under ``out_dir`` (default: the scenario's) and
    are recorded in the report by file name so repeated runs are
    byte-identical regardless of directory.
    """
    out = Path(out_dir if out_dir is not None else scenario.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    initial = scenario.initial_configuration()
    rule = RuleParams(scenario.r)
    report = RunReport(scenario=_scenario_echo(scenario))

    need_dense = {"spacetime", "lz-trace", "plateaus"} & set(scenario.analyses)
    run = evolve_trace(
        initial, rule, scenario.horizon, stride=1 if need_dense else max(1, scenario.horizon or 1)
    )

    def emit(filename: str, blob: bytes) -> None:
        (out / filename).write_bytes(blob)
        report.artifacts.append(filename)

    if "spacetime" in scenario.analyses:
        img = io_formats.SpaceTimeImage.from_run(run)
        emit(f"{scenario.name}_spacetime.pbm", io_formats.emit_pbm(img, binary=True))

    if "spectra-at" in scenario.analyses:
        spectra = spectrum_trace(run, list(scenario.spectra_times))
        emit(f"{scenario.name}_spectra.csv", io_formats.spectra_csv(spectra))
        periods = {
            t: longest_period_from_spectrum(s) for t, s in sorted(spectra.items())
        }
        report.checks.append(
            CheckResult(
                "longest-periods",
                passed=True,
                cases=len(periods),
                note=",".join(f"{t}:{p}" for t, p in periods.items()),
            )
        )

    trace = None
    if "lz-trace" in scenario.analyses or "plateaus" in scenario.analyses:
        trace = complexity_trace(run, label=scenario.name)
    if "lz-trace" in scenario.analyses:
        emit(f"{scenario.name}_lz.csv", io_formats.trace_csv(trace))
    if "plateaus" in scenario.analyses:
        if scenario.size & (scenario.size - 1) == 0:
            plateaus = detect_plateaus(trace, expected_change_points(scenario.size))
        else:
            plateaus = detect_plateaus(trace)
        blob = json.dumps(
            {
                "schema_version": REPORT_SCHEMA_VERSION,
                "intervals": [
                    {
                        "t_start": iv.t_start,
                        "t_end": iv.t_end,
                        "duration": iv.duration,
                        "mean": iv.mean,
                    }
                    for iv in plateaus.intervals
                ],
            },
            indent=2,
            sort_keys=True,
        ).encode("ascii")
        emit(f"{scenario.name}_plateaus.json", blob)

    if "verdict" in scenario.analyses:
        report.verdict = classify(initial, rule)
        report.checks.append(
            CheckResult(
                "verdict-matches-parity",
                passed=report.verdict.answer == parity(initial),
                cases=1,
            )
        )

    (out / f"{scenario.name}_report.json").write_bytes(report.to_json().encode("ascii"))
    return report


def _scenario_echo(s: Scenario) -> dict:
    return {
        "name": s.name,
        "size": s.size,
        "r": s.r,
        "init": s.init,
        "seed": s.seed,
        "horizon": s.horizon,
        "analyses": list(s.analyses),
        "spectra_times": list(s.spectra_times),
    }


# -- figure presets -------------------------------------------------------


def figure_preset(name: str, full_scale: bool = False) -> Scenario:
    """Named scenario for each space-time / spectra / complexity figure.

    Scaled-down sizes keep the presets desk-fast; ``full_scale`` selects
    the original N = 8192/8193 runs.
    """
    big = 8192 if full_scale else 256
    odd = big + 1
    presets = {
        "fig1-left": Scenario("fig1-left", 128, 1, "random", seed=1,
                              horizon=128, analyses=("spacetime",)),
        "fig1-right": Scenario("fig1-right", 127, 1, "random", seed=1,
                               horizon=128, analyses=("spacetime",)),
        "fig2-top": Scenario("fig2-top", 128, 2, "random-odd", seed=2,
                             horizon=64, analyses=("spacetime",)),
        "fig2-bottom": Scenario("fig2-bottom", 128, 8, "random-odd", seed=2,
                                horizon=16, analyses=("spacetime",)),
        "fig3": Scenario("fig3", big, 1, "random-odd", seed=3,
                         horizon=big - 2, analyses=("spectra-at",),
                         spectra_times=_cascade_schedule(big)),
        "fig4": Scenario("fig4", odd, 1, "random", seed=3,
                         horizon=0, analyses=("spectra-at",),
                         spectra_times=(0, odd + 100)),
        "fig5-left": Scenario("fig5-left", big, 1, "random-odd", seed=5,
                              horizon=big - 1, analyses=("lz-trace",)),
        "fig5-right": Scenario("fig5-right", odd, 1, "random", seed=5,
                               horizon=odd - 1, analyses=("lz-trace",)),
        "fig6": Scenario("fig6", big, 1, "random-odd", seed=5,
                         horizon=big - 2, analyses=("lz-trace", "plateaus")),
        "fig7": Scenario("fig7", 256, 1, "single-one",
                         horizon=255, analyses=("spacetime", "verdict")),
        "fig8-left": Scenario("fig8-left", big, 1, "single-one",
                              horizon=big - 1, analyses=("lz-trace",)),
        "fig8-right": Scenario("fig8-right", odd, 1, "single-one",
                               horizon=odd - 1, analyses=("lz-trace",)),
    }
    try:
        return presets[name]
    except KeyError:
        raise ValueError(
            f"unknown figure preset {name!r}; choose from {sorted(presets)}"
        ) from None


def _cascade_schedule(size: int) -> tuple[int, ...]:
    if size == 8192:
        return (0, 4095, 8000, 8160, 8180, 8184, 8188, 8190)
    return (0, size // 2 - 1, size - 32, size - 8, size - 4, size - 2)


# -- verification suites ---------------------------------------------------


def verify_all(
    sizes: list[int],
    samples: int = 100,
    seed: int = 0,
    step_fn=None,
) -> RunReport:
    """Run every invariant suite at ring sizes 2**n for n in ``sizes``.

    ``samples`` random configurations are drawn per size and suite; the
    report lists one check per suite with its worst measured deviation.
    ``step_fn`` substitutes the single-step implementation under test
    (the mutation hook used to prove the harness can fail).
    """
    if not sizes:
        raise ValueError("need at least one ring size exponent")
    if any(n < 1 for n in sizes):
        raise ValueError("size exponents must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    the_step = step_fn if step_fn is not None else step
    rng = SplitMix64(seed)
    report = RunReport(
        scenario={
            "name": "verify-all",
            "sizes": list(sizes),
            "samples": samples,
            "seed": seed,
        }
    )
    suites = (
        _suite_additivity,
        _suite_parity_odd_r,
        _suite_parity_even_r,
        _suite_stepped_parity_zero,
        _suite_even_zero_theorem,
        _suite_odd_zero_theorem,
        _suite_period_halving,
        _suite_backend_equivalence,
        _suite_plateau_structure,
    )
    for suite in suites:
        report.checks.append(suite(sizes, samples, rng, the_step))
    return report


def _draw(rng: SplitMix64, size: int) -> Configuration:
    return Configuration.from_word(size, rng.bits(size))


def _sample_space(size: int, samples: int, rng: SplitMix64):
    """All configurations when feasible, otherwise ``samples`` random ones."""
    if size <= 8:
        return [Configuration.from_word(size, w) for w in range(1 << size)]
    return [_draw(rng, size) for _ in range(samples)]


def _suite_additivity(sizes, samples, rng, the_step) -> CheckResult:
    failures = 0
    cases = 0
    for n in sizes:
        size = 1 << n
        for _ in range(samples):
            rho, tau = _draw(rng, size), _draw(rng, size)
            r = 1 + rng.next_word() % (2 * size)
            rule = RuleParams(r)
            if the_step(xor(rho, tau), rule) != xor(the_step(rho, rule), the_step(tau, rule)):
                failures += 1
            cases += 1
    return CheckResult("additivity", failures == 0, cases, float(failures))


def _suite_parity_odd_r(sizes, samples, rng, the_step) -> CheckResult:
    failures = 0
    cases = 0
    for n in sizes:
        size = 1 << n
        for c in _sample_space(size, samples, rng):
            for r in (1, 3, 5):
                if r % size == 0:
                    continue
                verdict = classify(c, RuleParams(r))
                if verdict.answer != parity(c) or verdict.decided_at != size - 1:
                    failures += 1
                cases += 1
    return CheckResult("parity-theorem-odd-r", failures == 0, cases, float(failures))


def _suite_parity_even_r(sizes, samples, rng, the_step) -> CheckResult:
    failures = 0
    cases = 0
    for n in sizes:
        size = 1 << n
        for c in _sample_space(size, samples, rng):
            for r in (2, 4, 6, 8, 12):
                rule = RuleParams(r)
                if rule.k >= n or r % size == 0:
                    continue
                verdict = classify(c, rule)
                ok = (
                    verdict.answer == parity(c)
                    and verdict.decided_at == (size >> rule.k) - 1
                )
                if not ok:
                    failures += 1
                cases += 1
    return CheckResult("parity-theorem-even-r", failures == 0, cases, float(failures))


def _suite_stepped_parity_zero(sizes, samples, rng, the_step) -> CheckResult:
    failures = 0
    cases = 0
    for n in sizes:
        size = 1 << n
        for c in _sample_space(size, samples, rng):
            r = 1 + rng.next_word() % (size - 1) if size > 1 else 1
            if r % size == 0:
                continue
            if parity(the_step(c, RuleParams(r))) != 0:
                failures += 1
            cases += 1
    return CheckResult("stepped-parity-zero", failures == 0, cases, float(failures))


def _suite_even_zero_theorem(sizes, samples, rng, the_step) -> CheckResult:
    worst = 0.0
    cases = 0
    for n in sizes:
        size = 1 << n
        for c in _sample_space(size, samples, rng):
            if parity(c) != 1:
                continue
            rep = check_even_zero_theorem(c, RuleParams(1))
            worst = max(worst, rep.max_value)
            cases += 1
    return CheckResult(
        "even-zero-theorem", worst <= ZERO_POWER_EPS, cases, worst,
        note=f"max S(2m) at t=N/2-1, threshold {ZERO_POWER_EPS:g}",
    )


def _suite_odd_zero_theorem(sizes, samples, rng, the_step) -> CheckResult:
    worst = 0.0
    cases = 0
    for n in sizes:
        size = 1 << n
        for c in _sample_space(size, samples, rng):
            t = size // 2 + rng.next_word() % (size - size // 2 + 1)
            rep = check_odd_zero_theorem(c, RuleParams(1), t)
            worst = max(worst, rep.max_value)
            cases += 1
    return CheckResult(
        "odd-zero-theorem", worst <= ZERO_POWER_EPS, cases, worst,
        note=f"max S(2m+1) for t in [N/2, N], threshold {ZERO_POWER_EPS:g}",
    )


def _suite_period_halving(sizes, samples, rng, the_step) -> CheckResult:
    failures = 0
    cases = 0
    rule = RuleParams(1)
    for n in sizes:
        size = 1 << n
        for c in _sample_space(size, samples, rng):
            for j in range(1, n + 1):
                t = size - (size >> j)
                if spatial_period(fast_evolve(c, rule, t)) > (size >> j):
                    failures += 1
                cases += 1
    return CheckResult("period-halving", failures == 0, cases, float(failures))


def _suite_backend_equivalence(sizes, samples, rng, the_step) -> CheckResult:
    failures = 0
    cases = 0
    for n in sizes:
        size = 1 << n
        for _ in range(samples):
            c = _draw(rng, size)
            r = 1 + rng.next_word() % 16
            t = rng.next_word() % 512
            rule = RuleParams(r)
            reference = c
            for _ in range(t):
                reference = the_step(reference, rule)
            agree = (
                reference
                == fast_evolve(c, rule, t)
                == poly_evolve(c, rule, t)
                == _packed_evolve(c, rule, t)
            )
            k = rng.next_word() % 6
            window_ref = c
            for _ in range((1 << k) - 1):
                window_ref = the_step(window_ref, rule)
            agree = agree and window_sum_jump(c, rule, k) == window_ref
            if not agree:
                failures += 1
            cases += 1
    return CheckResult("backend-equivalence", failures == 0, cases, float(failures))


def _packed_evolve(c: Configuration, rule: RuleParams, t: int) -> Configuration:
    for _ in range(t):
        c = step_packed(c, rule)
    return c


def _suite_plateau_structure(sizes, samples, rng, the_step) -> CheckResult:
    """Exact change points per run; strict mean decrease on the seed ensemble.

    Per-seed means fluctuate too much at small sizes for a pointwise
    strict decrease (ties are routine at N = 64), so the Table-1-style
    monotonicity is asserted on plateau means averaged across seeds.
    """
    failures = 0
    cases = 0
    for n in sizes:
        if n < 4:
            continue  # plateaus need a few halvings to be visible
        size = 1 << n
        schedule = expected_change_points(size)[:-1]  # horizon stops at N-2
        ensemble: list[list[float]] = []
        for _ in range(samples):
            c = random_config(size, rng.next_word(), force_odd=True)
            run = evolve_trace(c, RuleParams(1), size - 2)
            report = detect_plateaus(complexity_trace(run), expected_change_points(size))
            if report.boundaries() != schedule:
                failures += 1
            ensemble.append(report.means())
            cases += 1
        if n < 6:
            continue  # the mean decrease only sets in around 64 cells
        mean_of_means = np.mean(ensemble, axis=0)
        if not all(
            mean_of_means[i] > mean_of_means[i + 1]
            for i in range(1, len(mean_of_means) - 1)
        ):
            failures += 1
    return CheckResult("plateau-structure", failures == 0, cases, float(failures))
