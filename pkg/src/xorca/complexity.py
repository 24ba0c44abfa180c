"""LZ78 phrase-count complexity of configurations and plateau detection.

The LZ78 incremental parse splits a string into phrases: starting from
the empty dictionary, each new phrase is the longest already-seen
phrase extended by one fresh symbol.  A trailing fragment that runs out
of input while still matching a dictionary phrase counts as one final
phrase; that convention is what makes the all-ones string of length
8192 parse into 128 phrases and a single one followed by 8191 zeros
into 129.

Complexity traces serialise each configuration as its cell sequence,
index 0 first, and parse every time step with a fresh dictionary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import EvolutionRun

_VALID_SYMBOLS = frozenset((0, 1, 48, 49))  # raw bits or ASCII '0'/'1'


def _as_symbol_bytes(bits: str | bytes) -> bytes:
    data = bits.encode("ascii") if isinstance(bits, str) else bytes(bits)
    if not data:
        raise ValueError("cannot parse an empty string")
    if set(data) - _VALID_SYMBOLS:
        raise ValueError("input must consist of 0/1 symbols")
    return data


def lz78_phrase_count(bits: str | bytes) -> int:
    """Number of phrases in the LZ78 parse of a binary string.

    The dictionary is a trie keyed by (node, symbol); each input symbol
    either walks one edge or creates a new phrase, so the parse is
    linear in the input length.
    """
    data = _as_symbol_bytes(bits)
    edges: dict[int, int] = {}
    next_id = 1
    node = 0
    count = 0
    for sym in data:
        key = (node << 1) | (sym & 1)
        child = edges.get(key)
        if child is None:
            edges[key] = next_id
            next_id += 1
            count += 1
            node = 0
        else:
            node = child
    if node:  # trailing fragment, still inside a known phrase
        count += 1
    return count


def lz78_prefix_counts(bits: str | bytes) -> np.ndarray:
    """Phrase count of every prefix: entry j-1 is the count for bits[:j].

    One streaming pass; greedy LZ78 parses of prefixes are truncations
    of the full parse, so all prefix counts fall out of a single walk.
    """
    data = _as_symbol_bytes(bits)
    counts = np.empty(len(data), dtype=np.int64)
    edges: dict[int, int] = {}
    next_id = 1
    node = 0
    complete = 0
    for i, sym in enumerate(data):
        key = (node << 1) | (sym & 1)
        child = edges.get(key)
        if child is None:
            edges[key] = next_id
            next_id += 1
            complete += 1
            node = 0
        else:
            node = child
        counts[i] = complete + (1 if node else 0)
    return counts


@dataclass(frozen=True)
class ComplexityTrace:
    """Phrase counts along one run: ascending (t, count) pairs."""

    label: str
    values: tuple[tuple[int, int], ...]

    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.values])

    def counts(self) -> np.ndarray:
        return np.array([c for _, c in self.values])


def complexity_trace(run: EvolutionRun, label: str | None = None) -> ComplexityTrace:
    """Phrase count of the configuration string at each stored time step."""
    values = []
    for t in run.times():
        cells = run.snapshots[t].bits.tobytes()
        values.append((t, lz78_phrase_count(cells)))
    if label is None:
        label = f"N={run.size},r={run.rule.r}"
    return ComplexityTrace(label, tuple(values))


@dataclass(frozen=True)
class PlateauInterval:
    t_start: int
    t_end: int
    duration: int
    mean: float


@dataclass(frozen=True)
class PlateauReport:
    """Disjoint, ordered plateau intervals covering the sampled range."""

    intervals: tuple[PlateauInterval, ...]

    def boundaries(self) -> list[int]:
        """Start times of every plateau after the first."""
        return [iv.t_start for iv in self.intervals[1:]]

    def means(self) -> list[float]:
        return [iv.mean for iv in self.intervals]


def expected_change_points(size: int) -> list[int]:
    """Plateau starts for a power-of-two ring: t = N - N/2**j, j = 1..n.

    The j-th plateau of a parity-solving run lasts 2**(n-j-1) steps, so
    plateaus begin at N/2, N/2 + N/4, ..., N - 1.
    """
    if size < 2 or size & (size - 1):
        raise ValueError(f"change-point schedule needs a power-of-two size, got {size}")
    return [size - (size >> j) for j in range(1, size.bit_length())]


def detect_plateaus(
    trace: ComplexityTrace,
    expected_changepoints: list[int] | None = None,
    window: int = 16,
    drop: float = 0.02,
) -> PlateauReport:
    """Segment a complexity trace into plateaus.

    With ``expected_changepoints`` the trace is cut exactly there
    (points outside the sampled range are ignored).  Otherwise change
    points are detected as sustained drops: a cut is placed where the
    mean of the next ``window`` samples falls more than ``drop``
    (relative) below the mean of the previous ``window``.
    """
    if not trace.values:
        raise ValueError("cannot segment an empty trace")
    times = trace.times()
    counts = trace.counts()
    if expected_changepoints is not None:
        cuts = [t for t in sorted(set(expected_changepoints)) if times[0] < t <= times[-1]]
    else:
        cuts = _detect_drops(times, counts, window, drop)
    starts = [int(times[0])] + cuts
    ends = [c - 1 for c in cuts] + [int(times[-1])]
    intervals = []
    for s, e in zip(starts, ends):
        sel = (times >= s) & (times <= e)
        if not sel.any():  # possible with strided traces; nothing to average
            continue
        intervals.append(
            PlateauInterval(s, e, e - s + 1, float(counts[sel].mean()))
        )
    return PlateauReport(tuple(intervals))


def _detect_drops(times, counts, window, drop):
    if window < 1:
        raise ValueError("window must be a positive integer")
    cuts = []
    i = window
    while i + window <= len(counts):
        threshold = counts[i - window : i].mean() * (1.0 - drop)
        # sustained drop beginning exactly here: the sample and the
        # window it opens both sit below the previous window's mean
        if counts[i] < threshold and counts[i : i + window].mean() < threshold:
            cuts.append(int(times[i]))
            i += window  # debounce: skip past the drop just recorded
        else:
            i += 1
    return cuts
