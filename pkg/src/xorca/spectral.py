"""DFT power spectra of configurations and spectral zero theorems.

The transform of a configuration (a_0, ..., a_{N-1}) is

    amp(f) = (1/N) * sum_x a_x * exp(-2j*pi*x*f / N),   f = 0..N-1

and the power spectrum is S(f) = |amp(f)|**2.  With this normalisation
S(f) <= 1 for binary inputs and sum_f S(f) equals (ones count)/N.

Two transform routes are kept deliberately: :func:`dft` evaluates the
sum directly in O(N**2) and serves as the reference oracle;
:func:`fft` delegates to numpy's FFT and is the fast path for
power-of-two sizes.  The zero theorems:

* even frequencies (f = 2m, m >= 1) vanish at t = 2**(n-1) - 1 when the
  initial parity is odd and r is odd;
* odd frequencies (f = 2m+1) vanish for every t >= 2**(n-1) when r is
  odd, regardless of the initial parity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Configuration, UnsupportedSizeError, parity
from .engine import EvolutionRun, RuleParams, fast_evolve

#: Absolute threshold below which a power component counts as zero.
#: S(f) <= 1 under the 1/N normalisation and double-precision FFTs at
#: desk sizes keep rounding noise far beneath this.
ZERO_POWER_EPS = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Complex amplitudes and real power values of one configuration."""

    size: int
    amplitudes: np.ndarray
    power: np.ndarray

    @classmethod
    def from_amplitudes(cls, amplitudes: np.ndarray) -> "Spectrum":
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        power = np.abs(amplitudes) ** 2
        amplitudes.flags.writeable = False
        power.flags.writeable = False
        return cls(amplitudes.shape[0], amplitudes, power)


def dft(c: Configuration) -> Spectrum:
    """Direct O(N**2) transform; the reference every fast path answers to.

    Frequencies are evaluated in blocks so the N x N phase matrix never
    materialises in full for large rings.
    """
    n = c.size
    x = np.arange(n)
    values = c.bits.astype(np.float64)
    amps = np.empty(n, dtype=np.complex128)
    block = max(1, min(n, (1 << 21) // n))  # cap the phase-matrix footprint
    for start in range(0, n, block):
        f = np.arange(start, min(start + block, n))
        phases = np.exp((-2j * np.pi / n) * np.outer(f, x))
        amps[start : start + len(f)] = phases @ values / n
    return Spectrum.from_amplitudes(amps)


def fft(c: Configuration) -> Spectrum:
    """Fast transform for power-of-two rings; matches :func:`dft`."""
    if c.size & (c.size - 1):
        raise UnsupportedSizeError(
            f"fft needs a power-of-two ring size, got {c.size}"
        )
    return Spectrum.from_amplitudes(np.fft.fft(c.bits) / c.size)


def spectrum_of(c: Configuration) -> Spectrum:
    """fft on power-of-two rings, direct dft otherwise."""
    if c.size & (c.size - 1):
        return dft(c)
    return fft(c)


def longest_period_from_spectrum(s: Spectrum, eps: float = ZERO_POWER_EPS) -> int:
    """Longest spatial period visible in a spectrum.

    Returns size / f_min rounded to the nearest integer, where f_min is
    the smallest nonzero frequency with power above ``eps``; 1 for a
    pure-DC or null spectrum.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    above = np.nonzero(s.power[1:] > eps)[0]
    if len(above) == 0:
        return 1
    return round(s.size / (int(above[0]) + 1))


def spectral_flatness(s: Spectrum, eps: float = 1e-30) -> float:
    """Geometric over arithmetic mean of the nonzero-frequency powers.

    Close to 1 for white-noise-like spectra, close to 0 for spectra
    dominated by a few lines.  Reported for the non-power-of-two
    contrast runs; no hard threshold is attached to it.
    """
    tail = s.power[1:]
    if tail.size == 0 or tail.mean() == 0:
        return 0.0
    return float(np.exp(np.mean(np.log(tail + eps))) / tail.mean())


@dataclass(frozen=True)
class ZeroCheckReport:
    """Measured power at the frequencies a theorem says must vanish."""

    t: int
    frequencies: np.ndarray
    values: np.ndarray
    threshold: float
    passed: bool

    @property
    def max_value(self) -> float:
        return float(self.values.max()) if self.values.size else 0.0

    @property
    def worst_frequency(self) -> int:
        return int(self.frequencies[self.values.argmax()]) if self.values.size else 0


def _power_at(c0, rule, t):
    return fft(fast_evolve(c0, rule, t)).power


def check_even_zero_theorem(
    c0: Configuration, rule: RuleParams, eps: float = ZERO_POWER_EPS
) -> ZeroCheckReport:
    """Even nonzero frequencies vanish at t = 2**(n-1) - 1.

    Requires a power-of-two ring, odd r, and odd initial parity; the
    report carries the measured power at every even frequency 2m >= 2.
    """
    if c0.size & (c0.size - 1) or c0.size < 2:
        raise UnsupportedSizeError(
            f"theorem needs a power-of-two ring size >= 2, got {c0.size}"
        )
    if rule.r % 2 == 0:
        raise ValueError(f"theorem needs odd r, got {rule.r}")
    if parity(c0) != 1:
        raise ValueError("theorem needs an odd-parity initial configuration")
    t = c0.size // 2 - 1
    power = _power_at(c0, rule, t)
    freqs = np.arange(2, c0.size, 2)
    values = power[freqs]
    return ZeroCheckReport(t, freqs, values, eps, bool((values <= eps).all()))


def check_odd_zero_theorem(
    c0: Configuration, rule: RuleParams, t: int, eps: float = ZERO_POWER_EPS
) -> ZeroCheckReport:
    """Odd frequencies vanish at every t >= 2**(n-1) for odd r."""
    if c0.size & (c0.size - 1) or c0.size < 2:
        raise UnsupportedSizeError(
            f"theorem needs a power-of-two ring size >= 2, got {c0.size}"
        )
    if rule.r % 2 == 0:
        raise ValueError(f"theorem needs odd r, got {rule.r}")
    if t < c0.size // 2:
        raise ValueError(
            f"theorem holds from t = {c0.size // 2} onward, got t = {t}"
        )
    power = _power_at(c0, rule, t)
    freqs = np.arange(1, c0.size, 2)
    values = power[freqs]
    return ZeroCheckReport(t, freqs, values, eps, bool((values <= eps).all()))


def spectrum_trace(run: EvolutionRun, times: list[int]) -> dict[int, Spectrum]:
    """Spectra at the requested times, from snapshots where available."""
    return {t: spectrum_of(run.at(t)) for t in times}
