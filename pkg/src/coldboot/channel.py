"""Binary asymmetric channel: perturbation, parameter estimation, scoring."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bits import BitString

MIN_PROBABILITY = 1e-6
DEFAULT_PRECISION = 100.0


@dataclass(frozen=True)
class ChannelParams:
    """Flip rates: ``alpha`` for 0 -> 1, ``beta`` for 1 -> 0."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise ValueError(f"{name} must lie strictly inside (0, 1), got {p}")

    def log_table(self):
        """ln P(noisy=y | original=x) indexed as [x][y]."""
        a, b = self.alpha, self.beta
        return ((math.log1p(-a), math.log(a)), (math.log(b), math.log1p(-b)))


def perturb(key: BitString, params: ChannelParams, seed) -> BitString:
    """Flip each 0 bit with probability alpha and each 1 bit with probability beta.

    One uniform draw per bit position; reusing a seed across different rates
    therefore gives nested flip sets.
    """
    bits = key.to_array()
    u = np.random.default_rng(seed).random(key.length)
    threshold = np.where(bits == 1, params.beta, params.alpha)
    return BitString.from_array(bits ^ (u < threshold))


def transition_counts(candidate: BitString, noisy: BitString) -> tuple[int, int, int, int]:
    """(n00, n01, n10, n11) where n_xy counts candidate bit x against noisy bit y."""
    if candidate.length != noisy.length:
        raise ValueError(f"length mismatch: {candidate.length} vs {noisy.length}")
    return _counts(candidate.to_int(), noisy.to_int(), candidate.length)


def _counts(c: int, k: int, length: int):
    mask = (1 << length) - 1
    n11 = (c & k).bit_count()
    n10 = (c & ~k & mask).bit_count()
    n01 = (~c & k & mask).bit_count()
    return length - n11 - n10 - n01, n01, n10, n11


def log_likelihood(candidate: BitString, noisy: BitString, params: ChannelParams) -> float:
    n00, n01, n10, n11 = transition_counts(candidate, noisy)
    return _score(n00, n01, n10, n11, params.log_table())


def _score(n00, n01, n10, n11, logs) -> float:
    (l00, l01), (l10, l11) = logs
    return n00 * l00 + n01 * l01 + n10 * l10 + n11 * l11


def score_int(c: int, k: int, length: int, params: ChannelParams) -> float:
    """log_likelihood on raw integers, for the enumeration inner loops."""
    return _score(*_counts(c, k, length), params.log_table())


def to_weight(score: float, precision: float = DEFAULT_PRECISION) -> int:
    """Quantize a log-likelihood to a non-negative integer; likelier means smaller."""
    if precision <= 0:
        raise ValueError("precision must be positive")
    if score > 0:
        raise ValueError(f"log-likelihood cannot be positive, got {score}")
    return int(math.floor(-score * precision + 0.5))


def estimate_params(original: BitString, noisy: BitString) -> ChannelParams:
    n00, n01, n10, n11 = transition_counts(original, noisy)
    zeros, ones = n00 + n01, n10 + n11
    if zeros == 0 or ones == 0:
        raise ValueError("original must contain both 0 and 1 bits to estimate both rates")

    def clamp(p):
        return min(max(p, MIN_PROBABILITY), 1.0 - MIN_PROBABILITY)

    return ChannelParams(clamp(n01 / zeros), clamp(n10 / ones))
