"""Additive binary cellular automata on rings.

The rule family out[i] = c[i-r] XOR c[i] on circular arrays: evolution
backends that cross-check each other, parity classification on
power-of-two rings, DFT power spectra with the even/odd zero theorems,
LZ78 complexity traces with plateau detection, and reproducible
scenario runs with bit-exact artifact emitters.
"""

from .complexity import (
    ComplexityTrace,
    PlateauInterval,
    PlateauReport,
    complexity_trace,
    detect_plateaus,
    expected_change_points,
    lz78_phrase_count,
    lz78_prefix_counts,
)
from .core import (
    Configuration,
    SizeMismatchError,
    UnsupportedSizeError,
    block_parities,
    parity,
    spatial_period,
    xor,
)
from .engine import (
    EvolutionRun,
    PolyGF2,
    RuleParams,
    evolve_trace,
    fast_evolve,
    jump_pow2,
    poly_evolve,
    rule90_step,
    step,
    step_packed,
    window_sum_jump,
)
from .experiments import (
    RunReport,
    Scenario,
    SplitMix64,
    figure_preset,
    parse_scenario,
    random_config,
    run_scenario,
    verify_all,
)
from .io_formats import (
    RunFormatError,
    RunTruncatedError,
    RunVersionError,
    SpaceTimeImage,
    emit_csv,
    emit_pbm,
    load_run,
    save_run,
    spectra_csv,
    trace_csv,
)
from .parity_problem import (
    NonUniformReadoutError,
    ParityVerdict,
    classify,
    is_reachable_parity,
    null_absorption_time,
)
from .spectral import (
    ZERO_POWER_EPS,
    Spectrum,
    ZeroCheckReport,
    check_even_zero_theorem,
    check_odd_zero_theorem,
    dft,
    fft,
    longest_period_from_spectrum,
    spectral_flatness,
    spectrum_of,
    spectrum_trace,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexityTrace", "PlateauInterval", "PlateauReport", "complexity_trace",
    "detect_plateaus", "expected_change_points", "lz78_phrase_count",
    "lz78_prefix_counts",
    "Configuration", "SizeMismatchError", "UnsupportedSizeError",
    "block_parities", "parity", "spatial_period", "xor",
    "EvolutionRun", "PolyGF2", "RuleParams", "evolve_trace", "fast_evolve",
    "jump_pow2", "poly_evolve", "rule90_step", "step", "step_packed",
    "window_sum_jump",
    "RunReport", "Scenario", "SplitMix64", "figure_preset", "parse_scenario",
    "random_config", "run_scenario", "verify_all",
    "RunFormatError", "RunTruncatedError", "RunVersionError", "SpaceTimeImage",
    "emit_csv", "emit_pbm", "load_run", "save_run", "spectra_csv", "trace_csv",
    "NonUniformReadoutError", "ParityVerdict", "classify",
    "is_reachable_parity", "null_absorption_time",
    "ZERO_POWER_EPS", "Spectrum", "ZeroCheckReport", "check_even_zero_theorem",
    "check_odd_zero_theorem", "dft", "fft", "longest_period_from_spectrum",
    "spectral_flatness", "spectrum_of", "spectrum_trace",
]
