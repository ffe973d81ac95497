"""Parametric LowMC-style block cipher and Picnic-shaped key generation.

States, keys and matrix rows are Python ints (bit i = state bit i). Matrices
are lists of row masks, so a matrix-vector product over GF(2) is one parity
per row. Matrices come from SHAKE-256 in counter mode keyed by the instance
parameters; they are *not* the Picnic reference constants.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bits import BitString


@dataclass(frozen=True)
class LowMCParams:
    n: int  # block bits
    k: int  # key bits
    m: int  # S-boxes per round
    r: int  # rounds
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.r < 0 or self.m < 0:
            raise ValueError("need n, k >= 1 and r, m >= 0")
        if 3 * self.m > self.n:
            raise ValueError(f"{self.m} S-boxes need {3 * self.m} bits, block has {self.n}")


# --- GF(2) linear algebra ------------------------------------------------------

def matvec(rows: list[int], v: int) -> int:
    out = 0
    for i, row in enumerate(rows):
        out |= ((row & v).bit_count() & 1) << i
    return out


def gf2_rank(rows: list[int]) -> int:
    pivots = {}  # leading bit -> reduced row
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


def gf2_inverse(rows: list[int], n: int) -> list[int] | None:
    """Inverse of an n x n matrix by Gauss-Jordan, or None if singular."""
    aug = [row | (1 << (n + i)) for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i] >> col & 1), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(n):
            if i != col and aug[i] >> col & 1:
                aug[i] ^= aug[col]
    return [row >> n for row in aug]


def gf2_matmul(a: list[int], b: list[int]) -> list[int]:
    """Product a·b where b has len(b) rows; row i of a selects rows of b."""
    out = []
    for row in a:
        acc, i = 0, 0
        while row:
            if row & 1:
                acc ^= b[i]
            row >>= 1
            i += 1
        out.append(acc)
    return out


class _Xof:
    """Deterministic bit source: SHAKE-256 over (label, counter)."""

    def __init__(self, label: str):
        self.label = label.encode()
        self.counter = 0

    def bits(self, width: int) -> int:
        nbytes = (width + 7) // 8
        h = hashlib.shake_256(self.label + self.counter.to_bytes(8, "little"))
        self.counter += 1
        return int.from_bytes(h.digest(nbytes), "little") & ((1 << width) - 1)

    def matrix(self, rows: int, cols: int) -> list[int]:
        return [self.bits(cols) for _ in range(rows)]


# --- S-box ---------------------------------------------------------------------

def sbox(a: int, b: int, c: int) -> tuple[int, int, int]:
    return a ^ (b & c), a ^ b ^ (a & c), a ^ b ^ c ^ (a & b)


def sbox_inverse(x: int, y: int, z: int) -> tuple[int, int, int]:
    return x ^ y ^ (y & z), y ^ (x & z), x ^ y ^ z ^ (x & y)


def _box_mask(m: int) -> int:
    return sum(1 << (3 * j) for j in range(m))


def _sbox_layer(state: int, m: int, inverse: bool = False) -> int:
    # bitsliced over all m boxes; box j sits on bits 3j, 3j+1, 3j+2
    if m == 0:
        return state
    A = _box_mask(m)
    a, b, c = state & A, (state >> 1) & A, (state >> 2) & A
    x, y, z = (sbox_inverse if inverse else sbox)(a, b, c)
    return (state & ~(A * 7)) | x | (y << 1) | (z << 2)


# --- cipher --------------------------------------------------------------------

@dataclass(frozen=True)
class LowMCInstance:
    params: LowMCParams
    linear_layers: tuple
    inverse_layers: tuple
    round_constants: tuple
    key_matrices: tuple  # whitening matrix first, then one per round


def instantiate(params: LowMCParams) -> LowMCInstance:
    p = params
    xof = _Xof(f"lowmc n={p.n} k={p.k} m={p.m} r={p.r} seed={p.seed}")
    layers, inverses, consts, keymats = [], [], [], []
    for _ in range(p.r):
        while True:
            L = xof.matrix(p.n, p.n)
            inv = gf2_inverse(L, p.n)
            if inv is not None:
                break
        layers.append(tuple(L))
        inverses.append(tuple(inv))
        consts.append(xof.bits(p.n))
    full = min(p.n, p.k)
    for _ in range(p.r + 1):
        while True:
            M = xof.matrix(p.n, p.k)
            if gf2_rank(M) == full:
                break
        keymats.append(tuple(M))
    return LowMCInstance(p, tuple(layers), tuple(inverses), tuple(consts), tuple(keymats))


def _fit(bs: BitString, bits: int, what: str) -> int:
    """Accept exactly ``bits`` bits or a zero-padded byte-aligned form."""
    if bs.length not in (bits, 8 * ((bits + 7) // 8)):
        raise ValueError(f"{what} has {bs.length} bits, expected {bits}")
    v = bs.to_int()
    if v >> bits:
        raise ValueError(f"{what} has nonzero bits beyond position {bits}")
    return v


def encrypt_int(inst: LowMCInstance, key: int, block: int) -> int:
    p = inst.params
    state = block ^ matvec(inst.key_matrices[0], key)
    for i in range(p.r):
        state = _sbox_layer(state, p.m)
        state = matvec(inst.linear_layers[i], state)
        state ^= inst.round_constants[i]
        state ^= matvec(inst.key_matrices[i + 1], key)
    return state


def decrypt_int(inst: LowMCInstance, key: int, block: int) -> int:
    p = inst.params
    state = block
    for i in reversed(range(p.r)):
        state ^= matvec(inst.key_matrices[i + 1], key)
        state ^= inst.round_constants[i]
        state = matvec(inst.inverse_layers[i], state)
        state = _sbox_layer(state, p.m, inverse=True)
    return state ^ matvec(inst.key_matrices[0], key)


def encrypt(inst: LowMCInstance, key: BitString, message: BitString) -> BitString:
    p = inst.params
    return BitString.from_int(
        encrypt_int(inst, _fit(key, p.k, "key"), _fit(message, p.n, "message")), p.n)


def decrypt(inst: LowMCInstance, key: BitString, ciphertext: BitString) -> BitString:
    p = inst.params
    return BitString.from_int(
        decrypt_int(inst, _fit(key, p.k, "key"), _fit(ciphertext, p.n, "ciphertext")), p.n)


# --- Picnic parameter sets and key generation ----------------------------------

@dataclass(frozen=True)
class PicnicParamSet:
    name: str
    state_bits: int
    state_bytes: int
    lowmc: LowMCParams

    def __post_init__(self):
        if self.state_bytes != (self.state_bits + 7) // 8:
            raise ValueError("state_bytes must be ceil(state_bits / 8)")

    @property
    def level(self) -> str:
        return self.name.split("-")[1] if self.name.startswith("picnic-") else self.name.split("-")[-1]


DEFAULT_ROUNDS = 4

# (name, stateSizeBits, stateSizeBytes, S-boxes per round)
_PARAMSET_ROWS = [
    ("picnic-L1-FS", 128, 16, 10),
    ("picnic-L1-UR", 128, 16, 10),
    ("picnic-L1-full", 129, 17, 43),
    ("picnic3-L1", 129, 17, 43),
    ("picnic-L3-FS", 192, 24, 10),
    ("picnic-L3-UR", 192, 24, 10),
    ("picnic-L3-full", 192, 24, 64),
    ("picnic3-L3", 192, 24, 64),
    ("picnic-L5-FS", 256, 32, 10),
    ("picnic-L5-UR", 256, 32, 10),
    ("picnic-L5-full", 255, 32, 85),
    ("picnic3-L5", 255, 32, 85),
]

PARAMSETS = {
    name: PicnicParamSet(name, bits, nbytes, LowMCParams(bits, bits, m, DEFAULT_ROUNDS))
    for name, bits, nbytes, m in _PARAMSET_ROWS
}


def paramset_table() -> list[PicnicParamSet]:
    return list(PARAMSETS.values())


def get_paramset(name: str) -> PicnicParamSet:
    try:
        return PARAMSETS[name]
    except KeyError:
        raise KeyError(f"unknown parameter set {name!r}; known: {', '.join(PARAMSETS)}") from None


@lru_cache(maxsize=32)
def cached_instance(params: LowMCParams) -> LowMCInstance:
    return instantiate(params)


def keygen(paramset: PicnicParamSet, seed, instance: LowMCInstance | None = None):
    """Random (sk, (m, c)) stored on ``state_bytes`` bytes with trailing bits zeroed."""
    inst = instance or cached_instance(paramset.lowmc)
    rng = np.random.default_rng(seed)
    stored = 8 * paramset.state_bytes
    mask = (1 << paramset.state_bits) - 1

    def draw():
        raw = int.from_bytes(rng.bytes(paramset.state_bytes), "little") & mask
        return BitString.from_int(raw, stored)

    sk, m = draw(), draw()
    c = encrypt(inst, sk, m).resized(stored)
    return sk, (m, c)
