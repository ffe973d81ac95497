"""Dense statevector Grover search over an index space ``1..N``.

Index ``r`` lives in basis state ``r - 1``; the space is padded with unmarked
states up to the next power of two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

DEFAULT_CAP = 1 << 22


class SimulatorCapError(MemoryError):
    """Search space too large for the dense simulator."""


@dataclass(frozen=True)
class GroverConfig:
    space_size: int
    iterations: int | None = None  # None: derive from the marked count
    seed: int | None = None
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if not 1 <= self.space_size <= self.cap:
            raise SimulatorCapError(f"space size {self.space_size} outside [1, {self.cap}]")

    @property
    def padded_size(self) -> int:
        return 1 << (self.space_size - 1).bit_length()


@dataclass
class SearchOutcome:
    found: int | None
    oracle_queries: int
    iterations_executed: int
    backend: str
    prescan_queries: int = 0  # classical predicate evaluations spent learning M
    marked: int | None = None
    success_probability: float | None = None
    extra: dict = field(default_factory=dict)


def iteration_count(space_size: int, marked: int) -> int:
    """floor(pi/4 * sqrt(N / M)), at least 1."""
    if marked < 1:
        raise ValueError("no marked element: iteration count undefined")
    if marked > space_size:
        raise ValueError("more marked elements than states")
    return max(1, math.floor(math.pi / 4 * math.sqrt(space_size / marked)))


def success_probability(space_size: int, marked: int, iterations: int) -> float:
    if not 0 <= marked <= space_size:
        raise ValueError("marked must lie in [0, space_size]")
    theta = math.asin(math.sqrt(marked / space_size))
    return math.sin((2 * iterations + 1) * theta) ** 2


def grover_state(marked: np.ndarray, iterations: int, check_norm: bool = False) -> np.ndarray:
    """Amplitudes after ``iterations`` rounds of phase flip + inversion about the mean."""
    n = len(marked)
    psi = np.full(n, 1 / math.sqrt(n), dtype=np.complex128)
    for _ in range(iterations):
        psi[marked] *= -1
        psi = 2 * psi.mean() - psi
        if check_norm:
            norm = np.vdot(psi, psi).real
            if abs(norm - 1) > 1e-9:
                raise ArithmeticError(f"statevector norm drifted to {norm}")
    return psi


def marked_mask(predicate: Callable[[int], bool], space_size: int, padded: int) -> np.ndarray:
    mask = np.zeros(padded, dtype=bool)
    for r in range(1, space_size + 1):
        if predicate(r):
            mask[r - 1] = True
    return mask


def simulate(predicate: Callable[[int], bool], space_size: int, seed=None,
             cap: int = DEFAULT_CAP, mask: np.ndarray | None = None) -> SearchOutcome:
    """Run Grover once and measure.

    The marked count M is learned by a classical pre-scan (reported as
    ``prescan_queries``) purely to fix the iteration count. With no marked
    index the run still spends the iterations a single-solution search would.
    A precomputed ``mask`` skips the pre-scan.
    """
    cfg = GroverConfig(space_size, seed=seed, cap=cap)
    padded = cfg.padded_size
    prescan = 0
    if mask is None:
        mask = marked_mask(predicate, space_size, padded)
        prescan = space_size
    M = int(mask.sum())
    k = iteration_count(padded, max(M, 1))
    psi = grover_state(mask, k, check_norm=True)
    probs = np.abs(psi) ** 2
    probs /= probs.sum()
    idx = int(np.random.default_rng(seed).choice(padded, p=probs))
    r = idx + 1
    found = r if r <= space_size and predicate(r) else None
    return SearchOutcome(found, oracle_queries=k, iterations_executed=k, backend="grover-sim",
                         prescan_queries=prescan, marked=M,
                         success_probability=success_probability(padded, M, k))
