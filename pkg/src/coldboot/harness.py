"""Success-rate experiments over (beta, mu) grids for Picnic parameter sets.

Every trial draws its key pair and its perturbation stream from
(base_seed, trial) alone, so all grid points see the same keys and, for a
given trial, flip sets that grow with beta.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .bits import BitString
from .channel import DEFAULT_PRECISION, ChannelParams, perturb
from .enumeration import EnumerationParams, generate_candidates, padded_width
from .lowmc import PicnicParamSet, get_paramset, keygen
from .rankindex import WeightDistribution, min_weight

# chunk width and chunks per block used for each security level
LEVEL_CONFIG = {"L1": (8, 2), "L3": (8, 3), "L5": (8, 4)}
LEVEL_BETA_MAX = {"L1": 0.4, "L3": 0.3, "L5": 0.2}


def default_beta_grid(level: str) -> list[float]:
    top = round(LEVEL_BETA_MAX[level] * 100)
    return [0.001] + [k / 100 for k in range(1, top + 1)]


@dataclass
class ExperimentSpec:
    paramset: PicnicParamSet
    alpha: float = 0.001
    beta_grid: list = field(default_factory=lambda: [0.001])
    mu_grid: list = field(default_factory=lambda: [256])
    e_grid: list = field(default_factory=lambda: [30, 40, 50])
    trials: int = 100
    base_seed: int = 0
    w: int | None = None
    eta: int | None = None
    precision: float = DEFAULT_PRECISION

    def __post_init__(self):
        if isinstance(self.paramset, str):
            self.paramset = get_paramset(self.paramset)
        w, eta = LEVEL_CONFIG.get(self.paramset.level, (8, 2))
        self.w = self.w or w
        self.eta = self.eta or eta
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (self.beta_grid and self.mu_grid and self.e_grid):
            raise ValueError("grids must be non-empty")
        self.e_grid = sorted(self.e_grid)

    @property
    def W(self) -> int:
        return padded_width(self.paramset.state_bits, self.w, self.eta)

    def enumeration(self, mu: int) -> EnumerationParams:
        return EnumerationParams(self.W, self.w, self.eta, mu, key_bits=self.paramset.state_bits)


@dataclass
class TrialRecord:
    trial: int
    beta: float
    mu: int
    full_enum_recoverable: bool
    within_e: dict
    true_key_weight: int | None
    b_min: int
    b_e: dict
    within_e_rank: dict = field(default_factory=dict)


def noisy_key(spec: ExperimentSpec, beta: float, trial: int):
    sk, pk = keygen(spec.paramset, seed=[spec.base_seed, trial, 0])
    noisy = perturb(sk, ChannelParams(spec.alpha, beta), seed=[spec.base_seed, trial, 1])
    return sk, pk, noisy.resized(spec.W)


def run_trial(spec: ExperimentSpec, beta: float, mu: int, trial: int) -> TrialRecord:
    channel = ChannelParams(spec.alpha, beta)
    sk, _, noisy = noisy_key(spec, beta, trial)
    table = generate_candidates(noisy, spec.enumeration(mu), channel, spec.precision)
    b_min = min_weight(table)
    true_weight = table.key_weight(sk)
    if true_weight is None:
        false_map = {e: False for e in spec.e_grid}
        return TrialRecord(trial, beta, mu, False, false_map, None, b_min, {}, dict(false_map))
    dist = WeightDistribution(table)
    b_e = {e: dist.find_bound(b_min, 1 << e) for e in spec.e_grid}
    within = {e: true_weight < b_e[e] for e in spec.e_grid}
    # same event phrased through counts: fewer than 2^e candidates strictly lighter
    by_rank = {e: dist.below(true_weight) - dist.below(b_min) < 1 << e for e in spec.e_grid}
    return TrialRecord(trial, beta, mu, True, within, true_weight, b_min, b_e, by_rank)


def run_grid_point(spec: ExperimentSpec, beta: float, mu: int) -> dict:
    records = [run_trial(spec, beta, mu, t) for t in range(spec.trials)]
    row = {"beta": beta, "mu": mu,
           "rate_full": sum(r.full_enum_recoverable for r in records) / spec.trials}
    for e in spec.e_grid:
        row[f"rate_e{e}"] = sum(r.within_e[e] for r in records) / spec.trials
    row["trials"] = spec.trials
    return row


def run_experiment(spec: ExperimentSpec, progress=None) -> list[dict]:
    rows = []
    for mu in spec.mu_grid:
        for beta in spec.beta_grid:
            rows.append(run_grid_point(spec, beta, mu))
            if progress:
                progress(rows[-1])
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
