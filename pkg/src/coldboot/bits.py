"""Fixed-length bit strings.

Bit ``i`` lives in byte ``i // 8`` at position ``i % 8`` (least significant bit
first), so the byte storage read little-endian is the integer whose bit ``i``
is bit ``i`` of the string. Hex I/O is lowercase, byte 0 first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True, order=False)
class BitString:
    length: int
    data: bytes

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if len(self.data) != (self.length + 7) // 8:
            raise ValueError(
                f"storage has {len(self.data)} bytes, expected {(self.length + 7) // 8}"
            )
        if self.length % 8 and self.data[-1] >> (self.length % 8):
            raise ValueError("bits beyond length must be zero")

    # construction ---------------------------------------------------------
    @classmethod
    def from_int(cls, value: int, length: int) -> BitString:
        if value < 0 or value >> length:
            raise ValueError(f"value does not fit in {length} bits")
        return cls(length, value.to_bytes((length + 7) // 8, "little"))

    @classmethod
    def _unchecked(cls, value: int, length: int) -> BitString:
        # hot path for values already known to fit; skips validation
        obj = object.__new__(cls)
        object.__setattr__(obj, "length", length)
        object.__setattr__(obj, "data", value.to_bytes((length + 7) // 8, "little"))
        return obj

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitString:
        bits = [int(b) for b in bits]
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            value |= b << i
        return cls.from_int(value, len(bits))

    @classmethod
    def from_str(cls, text: str) -> BitString:
        """Parse ``"0110"`` with the first character as bit 0."""
        return cls.from_bits(int(ch) for ch in text)

    @classmethod
    def from_hex(cls, text: str, length: int | None = None) -> BitString:
        raw = bytes.fromhex(text)
        if length is None:
            length = 8 * len(raw)
        if len(raw) != (length + 7) // 8:
            raise ValueError(f"hex carries {len(raw)} bytes, {length} bits need {(length + 7) // 8}")
        return cls(length, raw)

    @classmethod
    def from_array(cls, bits: np.ndarray) -> BitString:
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(len(bits), np.packbits(bits, bitorder="little").tobytes())

    @classmethod
    def zeros(cls, length: int) -> BitString:
        return cls(length, bytes((length + 7) // 8))

    # views ----------------------------------------------------------------
    def to_int(self) -> int:
        return int.from_bytes(self.data, "little")

    def to_array(self) -> np.ndarray:
        arr = np.unpackbits(np.frombuffer(self.data, dtype=np.uint8), bitorder="little")
        return arr[: self.length]

    def hex(self) -> str:
        return self.data.hex()

    def bit_count(self) -> int:
        return self.to_int().bit_count()

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.data[i >> 3] >> (i & 7)) & 1

    def __str__(self):
        return "".join(str(self[i]) for i in range(self.length))

    # slicing / joining ----------------------------------------------------
    def extract(self, start: int, stop: int) -> BitString:
        """Bits ``start .. stop-1`` as a new string."""
        if not 0 <= start <= stop <= self.length:
            raise ValueError(f"bad range [{start}, {stop}) for length {self.length}")
        width = stop - start
        return BitString.from_int((self.to_int() >> start) & ((1 << width) - 1), width)

    def __add__(self, other: BitString) -> BitString:
        return BitString.from_int(self.to_int() | (other.to_int() << self.length),
                                  self.length + other.length)

    def resized(self, length: int) -> BitString:
        """Zero-extend, or truncate when every dropped bit is zero."""
        value = self.to_int()
        if value >> length:
            raise ValueError(f"cannot truncate to {length} bits: set bits would be lost")
        return BitString.from_int(value, length)

    def __xor__(self, other: BitString) -> BitString:
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitString.from_int(self.to_int() ^ other.to_int(), self.length)


def concat(parts: Iterable[BitString]) -> BitString:
    value, length = 0, 0
    for p in parts:
        value |= p.to_int() << length
        length += p.length
    return BitString.from_int(value, length)
