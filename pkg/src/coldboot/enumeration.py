"""Per-chunk candidate lists and block merging by optimal key enumeration."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .bits import BitString
from .channel import DEFAULT_PRECISION, ChannelParams, score_int, to_weight


@dataclass(frozen=True)
class EnumerationParams:
    """Key of ``W`` bits cut into ``w``-bit chunks, ``eta`` chunks per block.

    ``key_bits`` marks the meaningful prefix: every bit at index >= key_bits is
    known to be zero (zero-padded key storage). Defaults to ``W``.
    """

    W: int
    w: int
    eta: int
    mu: int
    key_bits: int | None = None

    def __post_init__(self):
        if min(self.W, self.w, self.eta, self.mu) < 1:
            raise ValueError("W, w, eta, mu must be positive")
        if self.W % self.w:
            raise ValueError(f"w={self.w} does not divide W={self.W}")
        if (self.W // self.w) % self.eta:
            raise ValueError(f"eta={self.eta} does not divide N={self.W // self.w}")
        if self.mu > 1 << (self.w * self.eta):
            raise ValueError(f"mu={self.mu} exceeds block space 2^{self.w * self.eta}")
        if self.key_bits is None:
            object.__setattr__(self, "key_bits", self.W)
        if not 0 < self.key_bits <= self.W:
            raise ValueError("key_bits must lie in [1, W]")

    @property
    def n_chunks(self) -> int:
        return self.W // self.w

    @property
    def xi(self) -> int:
        return self.n_chunks // self.eta

    @property
    def block_bits(self) -> int:
        return self.w * self.eta


def padded_width(bits: int, w: int, eta: int) -> int:
    """Smallest multiple of the block width covering ``bits``."""
    step = w * eta
    return -(-bits // step) * step


class ChunkCandidate(NamedTuple):
    weight: int
    value: BitString


def _canonical(entries):
    return sorted(entries, key=lambda e: (e.weight, e.value.to_int()))


def build_chunk_lists(noisy: BitString, params: EnumerationParams, channel: ChannelParams,
                      precision: float = DEFAULT_PRECISION) -> list[list[ChunkCandidate]]:
    """All admissible values of every ``w``-bit chunk, weighted and canonically sorted."""
    if noisy.length != params.W:
        raise ValueError(f"noisy key has {noisy.length} bits, expected W={params.W}")
    w, k = params.w, noisy.to_int()
    lists = []
    for i in range(params.n_chunks):
        chunk = (k >> (i * w)) & ((1 << w) - 1)
        # bits of this chunk at or beyond key_bits must stay zero
        free = min(max(params.key_bits - i * w, 0), w)
        forced = ((1 << w) - 1) ^ ((1 << free) - 1)
        entries = [
            ChunkCandidate(to_weight(score_int(c, chunk, w, channel), precision),
                           BitString.from_int(c, w))
            for c in range(1 << w) if not c & forced
        ]
        lists.append(_canonical(entries))
    return lists


class Okea:
    """Best-first enumerator over the product of canonically sorted lists.

    Emits combinations in non-decreasing total weight; equal weights come out
    in lexicographic order of the index tuple. Every index tuple has a unique
    parent (its last nonzero coordinate decremented), so the frontier needs no
    visited set.
    """

    def __init__(self, lists: Sequence[Sequence[ChunkCandidate]]):
        if not lists:
            raise ValueError("need at least one list")
        if any(len(l) == 0 for l in lists):
            raise ValueError("empty candidate list")
        self._weights = [[c.weight for c in l] for l in lists]
        self._values = [[c.value.to_int() for c in l] for l in lists]
        self._widths = [l[0].value.length for l in lists]
        self._shifts = [sum(self._widths[:d]) for d in range(len(lists))]
        self.total_bits = sum(self._widths)
        origin = (0,) * len(lists)
        self._heap = [(sum(ws[0] for ws in self._weights), origin)]
        self.emitted = 0

    @property
    def size(self) -> int:
        n = 1
        for ws in self._weights:
            n *= len(ws)
        return n

    def next_raw(self):
        """(weight, value as int, index tuple), or None once exhausted."""
        if not self._heap:
            return None
        weight, idx = heapq.heappop(self._heap)
        last = max((d for d, j in enumerate(idx) if j), default=0)
        for d in range(last, len(idx)):
            j = idx[d] + 1
            ws = self._weights[d]
            if j < len(ws):
                child = idx[:d] + (j,) + idx[d + 1:]
                heapq.heappush(self._heap, (weight - ws[j - 1] + ws[j], child))
        self.emitted += 1
        value = 0
        for d, j in enumerate(idx):
            value |= self._values[d][j] << self._shifts[d]
        return weight, value, idx

    def next(self):
        raw = self.next_raw()
        if raw is None:
            return None
        return raw[0], BitString.from_int(raw[1], self.total_bits)

    def __iter__(self):
        while (item := self.next()) is not None:
            yield item


def okea_init(lists: Sequence[Sequence[ChunkCandidate]]) -> Okea:
    return Okea(lists)


def okea_next(state: Okea):
    """Next ``(weight, value)`` pair, or ``None`` when exhausted."""
    return state.next()


@dataclass
class CandidateTable:
    lists: list[list[ChunkCandidate]]
    params: EnumerationParams
    channel: ChannelParams
    precision: float = DEFAULT_PRECISION
    _weights: list = field(default=None, repr=False, compare=False)
    _values: list = field(default=None, repr=False, compare=False)

    @property
    def xi(self) -> int:
        return len(self.lists)

    def weights(self) -> list[list[int]]:
        if self._weights is None:
            self._weights = [[c.weight for c in l] for l in self.lists]
        return self._weights

    def values(self) -> list[list[int]]:
        if self._values is None:
            self._values = [[c.value.to_int() for c in l] for l in self.lists]
        return self._values

    def max_weight(self) -> int:
        return sum(l[-1].weight for l in self.lists)

    def size(self) -> int:
        n = 1
        for l in self.lists:
            n *= len(l)
        return n

    def block_values(self, key: BitString) -> list[int]:
        bb = self.params.block_bits
        k = key.resized(self.params.W).to_int()
        return [(k >> (i * bb)) & ((1 << bb) - 1) for i in range(self.xi)]

    def locate(self, key: BitString) -> list[int] | None:
        """Positions of the key's block values in each list, or None if any is missing."""
        out = []
        for lst, v in zip(self.lists, self.block_values(key)):
            pos = next((j for j, c in enumerate(lst) if c.value.to_int() == v), None)
            if pos is None:
                return None
            out.append(pos)
        return out

    def key_weight(self, key: BitString) -> int | None:
        pos = self.locate(key)
        if pos is None:
            return None
        return sum(self.lists[i][j].weight for i, j in enumerate(pos))

    def join(self, picks: Sequence[int]) -> BitString:
        """Full key from one list position per block."""
        bb, value = self.params.block_bits, 0
        for i, (vals, j) in enumerate(zip(self.values(), picks)):
            value |= vals[j] << (i * bb)
        return BitString._unchecked(value, self.params.W)

    # text format ------------------------------------------------------------
    def to_text(self) -> str:
        p = self.params
        lines = [
            f"# W={p.W} w={p.w} eta={p.eta} mu={p.mu} key_bits={p.key_bits} "
            f"precision={self.precision!r} alpha={self.channel.alpha!r} beta={self.channel.beta!r}"
        ]
        for i, lst in enumerate(self.lists):
            lines.extend(f"{i} {c.weight} {c.value.hex()}" for c in lst)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CandidateTable:
        rows = [ln for ln in text.splitlines() if ln.strip()]
        if not rows or not rows[0].startswith("#"):
            raise ValueError("missing header line")
        head = dict(tok.split("=", 1) for tok in rows[0][1:].split())
        params = EnumerationParams(int(head["W"]), int(head["w"]), int(head["eta"]),
                                   int(head["mu"]), int(head["key_bits"]))
        channel = ChannelParams(float(head["alpha"]), float(head["beta"]))
        lists = [[] for _ in range(params.xi)]
        bb = params.block_bits
        for ln in rows[1:]:
            i, weight, hexval = ln.split()
            lists[int(i)].append(ChunkCandidate(int(weight), BitString.from_hex(hexval, bb)))
        return cls(lists, params, channel, float(head["precision"]))


def generate_candidates(noisy: BitString, params: EnumerationParams, channel: ChannelParams,
                        precision: float = DEFAULT_PRECISION) -> CandidateTable:
    """Top ``mu`` candidates of each block of ``eta`` chunks, canonically sorted."""
    chunks = build_chunk_lists(noisy, params, channel, precision)
    bb = params.block_bits
    lists = []
    for i in range(params.xi):
        okea = Okea(chunks[i * params.eta:(i + 1) * params.eta])
        best = []
        while len(best) < params.mu and (raw := okea.next_raw()) is not None:
            best.append(raw)
        best.sort(key=lambda r: (r[0], r[1]))
        lists.append([ChunkCandidate(wt, BitString.from_int(v, bb)) for wt, v, _ in best])
    return CandidateTable(lists, params, channel, precision)
