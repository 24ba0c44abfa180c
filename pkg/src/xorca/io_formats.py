"""Bit-exact emitters: PBM space-time images, CSV series, run containers.

Every emitter is a deterministic pure function of its input, so output
files are usable as golden files.  Conventions fixed here:

* PBM: cell state 1 renders black (raster bit 1), time runs top to
  bottom, row 0 is the initial configuration.  P4 rows are padded to a
  byte boundary with zero bits.
* CSV: line-feed newlines, reals with 12 significant digits, no locale
  formatting.
* Run container: binary, 4-byte magic ``XCAR`` + version, then packed
  snapshots; loading validates magic, version, sizes and length.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .complexity import ComplexityTrace
from .core import Configuration
from .engine import EvolutionRun, RuleParams
from .spectral import Spectrum

RUN_MAGIC = b"XCAR"
RUN_VERSION = 1


class RunFormatError(ValueError):
    """The byte stream is not a run container."""


class RunVersionError(RunFormatError):
    """The container version is not supported."""


class RunTruncatedError(RunFormatError):
    """The container ends before its declared contents."""


@dataclass(frozen=True)
class SpaceTimeImage:
    """Rows of cell states over time: row t is the configuration at t."""

    width: int
    height: int
    rows: np.ndarray  # uint8, shape (height, width)

    @classmethod
    def from_run(cls, run: EvolutionRun) -> "SpaceTimeImage":
        times = run.times()
        rows = np.vstack([run.snapshots[t].bits for t in times])
        return cls(run.size, len(times), rows)


def emit_pbm(img: SpaceTimeImage, binary: bool = True) -> bytes:
    """Portable bitmap bytes: P4 packed raster, or P1 text rows."""
    header = f"{'P4' if binary else 'P1'}\n{img.width} {img.height}\n"
    if binary:
        raster = np.packbits(img.rows, axis=1).tobytes()
        return header.encode("ascii") + raster
    body = "\n".join(
        (row + ord("0")).tobytes().decode("ascii") for row in img.rows
    )
    return (header + body + "\n").encode("ascii")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def spectra_csv(spectra: Mapping[int, Spectrum]) -> bytes:
    """Long-format power spectra: header t,f,S, rows ascending (t, f)."""
    lines = ["t,f,S"]
    for t in sorted(spectra):
        power = spectra[t].power
        lines.extend(f"{t},{f},{_fmt(power[f])}" for f in range(len(power)))
    return ("\n".join(lines) + "\n").encode("ascii")


def trace_csv(trace: ComplexityTrace) -> bytes:
    """Complexity trace: header t,c_lz then one row per sampled step."""
    lines = ["t,c_lz"]
    lines.extend(f"{t},{c}" for t, c in trace.values)
    return ("\n".join(lines) + "\n").encode("ascii")


def emit_csv(series: ComplexityTrace | Mapping[int, Spectrum]) -> bytes:
    """CSV for a complexity trace or a mapping of time -> spectrum."""
    if isinstance(series, ComplexityTrace):
        return trace_csv(series)
    return spectra_csv(series)


# -- run container -------------------------------------------------------

_HEADER = struct.Struct("<4sIQQQQQ")  # magic, version, N, r, horizon, stride, count


def save_run(run: EvolutionRun) -> bytes:
    times = run.times()
    head = _HEADER.pack(
        RUN_MAGIC, RUN_VERSION, run.size, run.rule.r,
        run.horizon, run.stride, len(times),
    )
    nbytes = (run.size + 7) // 8
    parts = [head]
    for t in times:
        parts.append(struct.pack("<Q", t))
        parts.append(run.snapshots[t].word.to_bytes(nbytes, "little"))
    return b"".join(parts)


def load_run(data: bytes) -> EvolutionRun:
    if len(data) < _HEADER.size:
        raise RunTruncatedError("container shorter than its header")
    magic, version, size, r, horizon, stride, count = _HEADER.unpack_from(data)
    if magic != RUN_MAGIC:
        raise RunFormatError(f"bad magic {magic!r}, expected {RUN_MAGIC!r}")
    if version != RUN_VERSION:
        raise RunVersionError(f"unsupported container version {version}")
    if size == 0:
        raise RunFormatError("container declares a zero-cell ring")
    if r == 0:
        raise RunFormatError("container declares shift r = 0")
    nbytes = (size + 7) // 8
    expected = _HEADER.size + count * (8 + nbytes)
    if len(data) != expected:
        raise RunTruncatedError(
            f"container holds {len(data)} bytes, expected {expected}"
        )
    snapshots: dict[int, Configuration] = {}
    pos = _HEADER.size
    for _ in range(count):
        (t,) = struct.unpack_from("<Q", data, pos)
        pos += 8
        word = int.from_bytes(data[pos : pos + nbytes], "little")
        pos += nbytes
        if word >> size:
            raise RunFormatError(f"snapshot at t={t} has bits beyond the ring")
        snapshots[t] = Configuration.from_word(size, word)
    if 0 not in snapshots:
        raise RunFormatError("container lacks the t=0 snapshot")
    return EvolutionRun(
        RuleParams(r), snapshots[0], horizon, snapshots, stride
    )
