"""Shared brute-force oracles, deliberately independent of the library.

Every oracle here recomputes its answer from first principles (explicit
index arithmetic, naive summation, dictionary-of-strings parsing) so
the fast paths in the package are checked against code that shares
nothing with them.
"""

from __future__ import annotations

import cmath
import random

import pytest

from xorca import Configuration


def step_oracle(bits: list[int], r: int) -> list[int]:
    """Per-cell rule evaluation: out[i] = (bits[i-r] + bits[i]) mod 2."""
    n = len(bits)
    return [(bits[(i - r) % n] + bits[i]) % 2 for i in range(n)]


def evolve_oracle(bits: list[int], r: int, t: int) -> list[int]:
    for _ in range(t):
        bits = step_oracle(bits, r)
    return bits


def dft_oracle(bits: list[int]) -> list[complex]:
    """Literal evaluation of the normalised transform, term by term."""
    n = len(bits)
    return [
        sum(bits[x] * cmath.exp(-2j * cmath.pi * x * f / n) for x in range(n)) / n
        for f in range(n)
    ]


def lz78_oracle(s: str) -> int:
    """Dictionary-of-strings parse; trailing fragment counts as a phrase."""
    seen: set[str] = set()
    current = ""
    count = 0
    for ch in s:
        current += ch
        if current not in seen:
            seen.add(current)
            count += 1
            current = ""
    if current:
        count += 1
    return count


def constant_string_count(n: int) -> int:
    """Closed form for c**n: smallest m with m(m+1)/2 >= n."""
    m = 1
    while m * (m + 1) // 2 < n:
        m += 1
    return m


def random_configuration(rnd: random.Random, size: int) -> Configuration:
    return Configuration.from_word(size, rnd.getrandbits(size))


@pytest.fixture
def rnd() -> random.Random:
    return random.Random(0xC0FFEE)
