"""Key recovery: classical interval scan and the hybrid quantum key search."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .bits import BitString
from .channel import DEFAULT_PRECISION, ChannelParams
from .costs import builtin_gate_counts, grover_cost, grover_queries
from .enumeration import CandidateTable, EnumerationParams, generate_candidates
from .grover import DEFAULT_CAP, SimulatorCapError, iteration_count, marked_mask, simulate
from .lowmc import LowMCInstance, encrypt_int
from .rankindex import WeightDistribution, WeightInterval, create, get_key, min_weight

BACKENDS = ("classical", "grover-sim", "cost-only")


class TestOracle:
    """Accepts a key iff it maps every stored plaintext to its ciphertext.

    Candidates may be longer than the cipher key (zero-padded storage); any
    set bit beyond the key length is an immediate reject. ``calls`` counts
    evaluations.
    """

    __test__ = False  # not a pytest class

    def __init__(self, instance: LowMCInstance, pairs: Sequence[tuple[BitString, BitString]]):
        if not pairs:
            raise ValueError("need at least one plaintext/ciphertext pair")
        self.instance = instance
        n = instance.params.n
        self.pairs = [(m.resized(n).to_int(), c.resized(n).to_int()) for m, c in pairs]
        self.key_bits = instance.params.k
        self.calls = 0

    def __call__(self, key: BitString) -> bool:
        self.calls += 1
        k = key.to_int()
        if k >> self.key_bits:
            return False
        return all(encrypt_int(self.instance, k, m) == c for m, c in self.pairs)


@dataclass(frozen=True)
class SearchPlan:
    e: int  # exponent: search the ~2^e best candidates
    backend: str
    params: EnumerationParams
    channel: ChannelParams
    precision: float = DEFAULT_PRECISION
    seed: int = 0
    cap: int = DEFAULT_CAP
    max_retries: int = 10
    cipher_id: str | None = None  # per-query gate counts for cost reporting

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.e < 0:
            raise ValueError("e must be non-negative")


@dataclass
class KeySearchOutcome:
    key: BitString | None
    found: int | None  # index r inside the interval that produced the key
    oracle_queries: int
    iterations_executed: int
    backend: str
    prescan_queries: int = 0
    retries: int = 0
    b_min: int = 0
    b_e: int = 0
    intervals: list = field(default_factory=list)
    costs: dict | None = None

    def as_dict(self) -> dict:
        return {
            "key": None if self.key is None else self.key.hex(),
            "key_bits": None if self.key is None else self.key.length,
            "found": self.found,
            "oracle_queries": self.oracle_queries,
            "iterations_executed": self.iterations_executed,
            "backend": self.backend,
            "prescan_queries": self.prescan_queries,
            "retries": self.retries,
            "b_min": self.b_min,
            "b_e": self.b_e,
            "intervals": self.intervals,
            "costs": self.costs,
        }


def _scan(table, interval, oracle, size):
    """Test r = 1, 2, ... in order; (r, key, tests) of the first accepted key."""
    matrix = create(table, interval)
    for r in range(1, size + 1):
        key = get_key(table, matrix, interval, r)
        if oracle(key):
            return r, key, r
    return None, None, size


def key_search_classical(noisy: BitString, interval: WeightInterval, params: EnumerationParams,
                         channel: ChannelParams, oracle, precision: float = DEFAULT_PRECISION,
                         table: CandidateTable | None = None) -> BitString | None:
    table = table or generate_candidates(noisy, params, channel, precision)
    matrix = create(table, interval)
    r = 1
    while (key := get_key(table, matrix, interval, r)) is not None:
        if oracle(key):
            return key
        r += 1
    return None


def qks(noisy: BitString, plan: SearchPlan, oracle, table: CandidateTable | None = None) -> KeySearchOutcome:
    """Search the ~2^e likeliest candidates in growing sub-intervals.

    Sub-interval s holds roughly 2^s candidates and they tile [B_min, B_e)
    exactly. Interval sizes come from the exact weight distribution; the
    rank matrix is only built where keys must be materialised.
    """
    table = table or generate_candidates(noisy, plan.params, plan.channel, plan.precision)
    dist = WeightDistribution(table)
    b_min = min_weight(table)
    b_e = dist.find_bound(b_min, 1 << plan.e)
    out = KeySearchOutcome(None, None, 0, 0, plan.backend, b_min=b_min, b_e=b_e)

    b1, b2, s = b_min, b_min + 1, 0
    while b1 < b_e:
        b2 = min(b2, b_e)
        interval = WeightInterval(b1, b2)
        size = dist.rank(interval)
        row = {"s": s, "b1": b1, "b2": b2, "size": size, "queries": 0, "retries": 0}
        out.intervals.append(row)
        if size:
            if plan.backend == "classical":
                r, key, tests = _scan(table, interval, oracle, size)
                row["queries"] = tests
                out.oracle_queries += tests
            elif plan.backend == "grover-sim":
                r, key = _grover_interval(table, interval, size, s, plan, oracle, row, out)
            else:
                q = iteration_count(size, 1)
                row["queries"] = q
                out.oracle_queries += q
                out.iterations_executed += q
                r = key = None
            if key is not None:
                out.key, out.found = key, r
                break
        s += 1
        b1 = b2
        b2 = dist.find_bound(b1, 1 << s)

    if plan.backend == "classical":
        out.iterations_executed = out.oracle_queries
    if plan.cipher_id is not None:
        out.costs = _cost_summary(plan, out)
    return out


def _grover_interval(table, interval, size, s, plan, oracle, row, out):
    if size > plan.cap:
        raise SimulatorCapError(
            f"sub-interval s={s} [{interval.b1}, {interval.b2}) holds {size} candidates, "
            f"simulator cap is {plan.cap}")
    matrix = create(table, interval)

    def predicate(r):
        return oracle(get_key(table, matrix, interval, r))

    padded = 1 << (size - 1).bit_length()
    mask = marked_mask(predicate, size, padded)
    out.prescan_queries += size
    for attempt in range(plan.max_retries):
        res = simulate(predicate, size, seed=[plan.seed, s, attempt], cap=plan.cap, mask=mask)
        row["queries"] += res.oracle_queries
        out.oracle_queries += res.oracle_queries
        out.iterations_executed += res.iterations_executed
        if res.found is not None:
            return res.found, get_key(table, matrix, interval, res.found)
        if not res.marked:
            break
        row["retries"] += 1
        out.retries += 1
    return None, None


def _cost_summary(plan: SearchPlan, out: KeySearchOutcome) -> dict:
    per_query = builtin_gate_counts(plan.cipher_id)
    single = grover_cost(per_query, plan.e)
    accumulated = per_query.scaled(out.oracle_queries)
    return {
        "cipher": plan.cipher_id,
        "per_query": per_query.as_dict(),
        "accumulated_queries": out.oracle_queries,
        "accumulated": accumulated.as_dict(),
        "single_interval_queries": grover_queries(plan.e),
        "single_interval": single.as_dict(),
        # sum_{s<=e} pi/4 2^(s/2) ~ pi/4 2^(e/2) * sqrt2/(sqrt2-1)
        "geometric_ratio": math.sqrt(2) / (math.sqrt(2) - 1),
    }
