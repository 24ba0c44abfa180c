"""Circular binary configurations and their elementary predicates.

A configuration is a fixed-length ring of cells, each holding 0 or 1.
Cell indices are taken modulo the ring size, so index ``i`` and ``i + N``
name the same cell; index 0 is the leftmost cell in every textual or
graphical rendering.

Storage is bit-packed: cell ``i`` lives in bit ``i`` of a Python integer
(little-endian bit order), which makes XOR, rotation and population
counts word-parallel.  A numpy ``uint8`` view is materialised lazily for
vectorised consumers.  All operations here are pure functions on
immutable values.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np


class SizeMismatchError(ValueError):
    """Raised when two configurations of different sizes are combined."""


class UnsupportedSizeError(ValueError):
    """Raised when an operation requires a ring size it cannot handle."""


class Configuration:
    """An immutable ring of ``size`` binary cells.

    Construct via :meth:`from_string`, :meth:`from_bits`,
    :meth:`from_word`, :meth:`zeros`, :meth:`ones` or
    :meth:`single_one`.
    """

    __slots__ = ("_size", "_word", "_array")

    def __init__(self, size: int, word: int):
        size = int(size)
        word = int(word)
        if size < 1:
            raise ValueError(f"ring size must be >= 1, got {size}")
        if word < 0 or word >> size:
            raise ValueError("cell word has bits outside the ring")
        self._size = size
        self._word = word
        self._array: np.ndarray | None = None

    # -- constructors ------------------------------------------------

    @classmethod
    def from_word(cls, size: int, word: int) -> "Configuration":
        """Cells from a little-endian packed integer (bit i = cell i)."""
        return cls(size, word)

    @classmethod
    def from_string(cls, literal: str) -> "Configuration":
        """Parse a '0'/'1' literal, index 0 first (the file/CLI format)."""
        s = literal.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a binary configuration literal: {literal!r}")
        word = int(s[::-1], 2)
        return cls(len(s), word)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Configuration":
        word = 0
        n = 0
        for b in bits:
            b = int(b)
            if b not in (0, 1):
                raise ValueError(f"cell state must be 0 or 1, got {b!r}")
            word |= b << n
            n += 1
        return cls(n, word)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Configuration":
        arr = np.asarray(arr)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("configuration array must be one-dimensional and non-empty")
        if arr.dtype.kind not in "bui" or int(arr.min()) < 0 or int(arr.max()) > 1:
            raise ValueError("cell states must be the integers 0 and 1")
        packed = np.packbits(arr.astype(np.uint8, copy=False), bitorder="little")
        return cls(arr.shape[0], int.from_bytes(packed.tobytes(), "little"))

    @classmethod
    def zeros(cls, size: int) -> "Configuration":
        return cls(size, 0)

    @classmethod
    def ones(cls, size: int) -> "Configuration":
        return cls(size, (1 << size) - 1)

    @classmethod
    def single_one(cls, size: int, index: int = 0) -> "Configuration":
        """All zeros except cell ``index`` (default: the leftmost cell)."""
        return cls(size, 1 << (index % size))

    # -- views -------------------------------------------------------

    @property
    def size(self) -> int:
        return self._size

    @property
    def word(self) -> int:
        """Packed little-endian cell word (bit i = cell i)."""
        return self._word

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the cells, index 0 first."""
        if self._array is None:
            nbytes = (self._size + 7) // 8
            raw = np.frombuffer(
                self._word.to_bytes(nbytes, "little"), dtype=np.uint8
            )
            arr = np.unpackbits(raw, count=self._size, bitorder="little")
            arr.flags.writeable = False
            self._array = arr
        return self._array

    def to_string(self) -> str:
        """Textual literal, cell 0 first."""
        return (self.bits + ord("0")).tobytes().decode("ascii")

    def __getitem__(self, i: int) -> int:
        return (self._word >> (i % self._size)) & 1

    def __len__(self) -> int:
        return self._size

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        if self._size <= 64:
            return f"Configuration({self.to_string()!r})"
        return f"Configuration(size={self._size}, ones={self.popcount()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self._size == other._size and self._word == other._word

    def __hash__(self) -> int:
        return hash((self._size, self._word))

    def __xor__(self, other: "Configuration") -> "Configuration":
        if not isinstance(other, Configuration):
            return NotImplemented
        if self._size != other._size:
            raise SizeMismatchError(
                f"cannot combine rings of size {self._size} and {other._size}"
            )
        return Configuration(self._size, self._word ^ other._word)

    # -- ring arithmetic ----------------------------------------------

    def rotate(self, shift: int) -> "Configuration":
        """New configuration with out[i] = self[i - shift] (ring shift)."""
        return Configuration(self._size, rotate_word(self._word, shift, self._size))

    def popcount(self) -> int:
        return self._word.bit_count()

    def is_null(self) -> bool:
        return self._word == 0


def rotate_word(word: int, shift: int, size: int) -> int:
    """Rotate a packed ring word so bit (i - shift) mod size lands at bit i."""
    shift %= size
    if shift == 0:
        return word
    mask = (1 << size) - 1
    return ((word << shift) | (word >> (size - shift))) & mask


def parity(c: Configuration) -> int:
    """Parity bit of a configuration: number of one-cells mod 2."""
    return c.popcount() & 1


def xor(a: Configuration, b: Configuration) -> Configuration:
    """Cell-wise sum modulo two of two same-size configurations."""
    return a ^ b


def spatial_period(c: Configuration) -> int:
    """Smallest divisor p of the size with c[i + p] == c[i] for all i.

    The all-zero and all-one rings have period 1.
    """
    for p in _sorted_divisors(c.size):
        if rotate_word(c.word, p, c.size) == c.word:
            return p
    return c.size  # unreachable: size itself always qualifies


def block_parities(c: Configuration, block: int) -> list[int]:
    """Parity of each aligned block of ``block`` consecutive cells.

    Entry m covers cells [m*block, (m+1)*block).  ``block`` must divide
    the ring size.
    """
    if block < 1 or c.size % block:
        raise ValueError(f"block {block} does not divide ring size {c.size}")
    mask = (1 << block) - 1
    word = c.word
    return [
        ((word >> (m * block)) & mask).bit_count() & 1
        for m in range(c.size // block)
    ]


def _sorted_divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]
