"""Acceptance criteria, one test each.

Every test stores a verdict line in ``RESULTS``; the conftest summary hook
prints them after the run (they also go to stdout under ``-s``).
"""
import itertools
import math
import random
import time

import numpy as np
import pytest

from coldboot.bits import BitString
from coldboot.channel import ChannelParams, estimate_params, perturb
from coldboot.costs import GATE_TABLE, PUBLISHED_GROVER_TOTALS, builtin_gate_counts, cost_report, grover_cost
from coldboot.enumeration import (CandidateTable, ChunkCandidate, EnumerationParams, Okea,
                                  build_chunk_lists, generate_candidates)
from coldboot.grover import grover_state, iteration_count, simulate
from coldboot.harness import ExperimentSpec, run_experiment
from coldboot.lowmc import (LowMCParams, cached_instance, decrypt, decrypt_int, encrypt, encrypt_int,
                            get_paramset, instantiate, sbox, sbox_inverse)
from coldboot.rankindex import WeightDistribution, WeightInterval, create, get_key, min_weight
from coldboot.search import SearchPlan, TestOracle, qks

RESULTS = {}


def record(num, name, ok, elapsed, limit, detail=""):
    verdict = "PASS" if ok and elapsed < limit else "FAIL"
    line = f"criterion {num} {name}: {verdict} ({elapsed:.2f} s, limit {limit:g} s){' ' + detail if detail else ''}"
    RESULTS[num] = line
    print(line)
    return verdict == "PASS"


# 1 -------------------------------------------------------------------------------

def random_table(rng):
    xi, mu = rng.randint(1, 4), rng.randint(1, 8)
    lists = []
    for _ in range(xi):
        n = rng.randint(1, mu)
        weights = sorted(rng.randint(0, 15) for _ in range(n))
        values = rng.sample(range(16), n)
        lists.append(sorted((ChunkCandidate(wt, BitString.from_int(v, 4)) for wt, v in zip(weights, values)),
                            key=lambda c: (c.weight, c.value.to_int())))
    params = EnumerationParams(4 * xi, 4, 1, max(len(l) for l in lists))
    return CandidateTable(lists, params, ChannelParams(0.001, 0.05))


def test_rank_index_oracle_equivalence():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    mismatches = intervals = keys = 0
    for _ in range(200):
        table = random_table(rng)
        ws = table.weights()
        vals = [[c.value.to_int() for c in l] for l in table.lists]
        # exhaustive census in lexicographic pick order
        picks = np.array(list(itertools.product(*(range(len(w)) for w in ws))), dtype=np.int64)
        totals = sum(np.array(ws[i])[picks[:, i]] for i in range(table.xi))
        full = sum(np.array(vals[i])[picks[:, i]] << (4 * i) for i in range(table.xi))
        ordered = np.sort(totals)
        for b1 in range(64):
            lo = int(np.searchsorted(ordered, b1))
            for b2 in range(b1 + 1, 65):
                iv = WeightInterval(b1, b2)
                m = create(table, iv)
                count = int(np.searchsorted(ordered, b2)) - lo
                expected = full[(totals >= b1) & (totals < b2)].tolist() if count else []
                got = [get_key(table, m, iv, r).to_int() for r in range(1, m.total + 1)]
                intervals += 1
                keys += len(got)
                if m.total != count or got != expected or get_key(table, m, iv, m.total + 1) is not None:
                    mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = record(1, "rank/index oracle equivalence", mismatches == 0, elapsed, 10,
                f"[{intervals} intervals, {keys} keys, {mismatches} mismatches]")
    assert mismatches == 0
    assert ok, f"exact but over the time limit: {elapsed:.1f} s"


# 2 -------------------------------------------------------------------------------

def test_okea_optimality():
    rng = np.random.default_rng(7)
    shapes = [(w, eta) for w in range(1, 9) for eta in range(1, 5) if w * eta <= 16]
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        w, eta = shapes[rng.integers(len(shapes))]
        channel = ChannelParams(float(rng.uniform(0.001, 0.2)), float(rng.uniform(0.001, 0.4)))
        noisy = BitString.from_array(rng.integers(0, 2, w * eta, dtype=np.uint8))
        lists = build_chunk_lists(noisy, EnumerationParams(w * eta, w, eta, 1), channel)
        emitted = [wt for wt, _, _ in iter(Okea(lists).next_raw, None)]
        cw = [np.array([c.weight for c in l]) for l in lists]
        total = cw[0]
        for arr in cw[1:]:
            total = (total[:, None] + arr[None, :]).ravel()
        bad += emitted != sorted(total.tolist())
    elapsed = time.perf_counter() - t0
    ok = record(2, "OKEA optimality", bad == 0, elapsed, 30, f"[{bad} mismatching instances]")
    assert bad == 0 and ok


# 3 -------------------------------------------------------------------------------

def test_grover_simulator():
    t0 = time.perf_counter()
    target = 613
    mask = np.zeros(1024, dtype=bool)
    mask[target - 1] = True
    k = iteration_count(1024, 1)
    prob = abs(grover_state(mask, k, check_norm=True)[target - 1]) ** 2
    expected = math.sin(51 * math.asin(1 / 32)) ** 2
    hits = sum(simulate(lambda r: r == target, 1024, seed=[3, i], mask=mask).found == target
               for i in range(1000))
    elapsed = time.perf_counter() - t0
    ok = k == 25 and abs(prob - expected) < 1e-6 and hits >= 990
    passed = record(3, "Grover simulator", ok, elapsed, 60,
                    f"[p={prob:.6f} vs {expected:.6f}, {hits}/1000 hits]")
    assert ok and passed


# 4 -------------------------------------------------------------------------------

REFERENCE_GATE_COUNTS = {
    "aes-128": (291150, 83116, 54400), "aes-192": (328612, 93160, 60928),
    "aes-256": (402878, 114778, 75072), "present-64/80": (18892, 67456, 59024),
    "present-64/128": (19608, 71424, 62496), "gift-64/128": (7424, 57344, 50176),
    "gift-128/128": (12288, 98304, 86016), "lowmc-L1": (689944, 4932, 8400),
    "lowmc-L3": (2271870, 9398, 12600), "lowmc-L5": (5070324, 14274, 15960),
}


def test_cost_tables():
    t0 = time.perf_counter()
    worst_ct, worst_cliff = 0.0, 1.0
    for level in ("lowmc-L1", "lowmc-L3", "lowmc-L5"):
        for e in (30, 40, 50):
            got = grover_cost(builtin_gate_counts(level), e)
            pub = PUBLISHED_GROVER_TOTALS[(level, e)]
            worst_ct = max(worst_ct, abs(got.cnot / pub.cnot - 1), abs(got.t / pub.t - 1))
            ratio = got.cliff1q / pub.cliff1q
            worst_cliff = max(worst_cliff, ratio, 1 / ratio)
    tables = {cid: (g.cnot, g.cliff1q, g.t) for cid, g in GATE_TABLE.items()} == REFERENCE_GATE_COUNTS
    note = "note" in cost_report("lowmc-L1", 30)
    elapsed = time.perf_counter() - t0
    ok = worst_ct < 0.01 and worst_cliff <= 1.3 and tables and note
    passed = record(4, "cost tables", ok, elapsed, 1,
                    f"[CNOT/T worst rel err {worst_ct:.4f}, 1qCliff worst factor {worst_cliff:.3f}]")
    assert ok and passed


# 5 -------------------------------------------------------------------------------

def test_end_to_end_recovery():
    cipher = instantiate(LowMCParams(n=16, k=16, m=2, r=4, seed=7))
    channel = ChannelParams(0.001, 0.05)
    params = EnumerationParams(16, 4, 2, 16)
    t0 = time.perf_counter()
    agree = eligible = recovered = 0
    for seed in range(100):
        rng = np.random.default_rng([seed, 0])
        key = BitString.from_int(int(rng.integers(0, 1 << 16)), 16)
        msgs = [BitString.from_int(int(rng.integers(0, 1 << 16)), 16) for _ in range(2)]
        oracle = TestOracle(cipher, [(m, encrypt(cipher, key, m)) for m in msgs])
        noisy = perturb(key, channel, seed=[seed, 1])
        table = generate_candidates(noisy, params, channel)
        c = qks(noisy, SearchPlan(12, "classical", params, channel, seed=seed), oracle, table)
        g = qks(noisy, SearchPlan(12, "grover-sim", params, channel, seed=seed), oracle, table)
        wt = table.key_weight(key)
        if wt is not None and c.b_min <= wt < c.b_e:
            eligible += 1
            recovered += c.key == key and g.key == key
        agree += c.key == g.key
    elapsed = time.perf_counter() - t0
    ok = agree == 100 and recovered == eligible
    passed = record(5, "end-to-end recovery", ok, elapsed, 300,
                    f"[agree {agree}/100, recovered {recovered}/{eligible} eligible]")
    assert ok and passed


# 6 -------------------------------------------------------------------------------

def test_success_rate_experiment():
    betas = [0.001, 0.05, 0.1, 0.2, 0.3, 0.4]
    spec = ExperimentSpec("picnic-L1-FS", alpha=0.001, beta_grid=betas, mu_grid=[256],
                          e_grid=[30, 40, 50], trials=20)
    assert spec.W == 128 and (spec.w, spec.eta) == (8, 2)
    t0 = time.perf_counter()
    rows = run_experiment(spec)
    elapsed = time.perf_counter() - t0
    full = [r["rate_full"] for r in rows]

    def sigma(p):
        return math.sqrt(max(p * (1 - p), 1 / spec.trials) / spec.trials)

    # any later rate may exceed an earlier one only by 3 combined standard errors
    monotone = all(full[j] - full[i] <= 3 * math.hypot(sigma(full[i]), sigma(full[j]))
                   for i in range(len(full)) for j in range(i + 1, len(full)))
    nested = all(r["rate_e30"] <= r["rate_e40"] <= r["rate_e50"] <= r["rate_full"] for r in rows)
    ok = full[0] >= 0.95 and monotone and nested
    passed = record(6, "success-rate experiment", ok, elapsed, 1200,
                    "[rate_full " + " ".join(f"{b}:{f:.2f}" for b, f in zip(betas, full)) + "]")
    assert ok and passed


# 7 -------------------------------------------------------------------------------

def test_lowmc_sanity():
    t0 = time.perf_counter()
    ps = get_paramset("picnic-L1-full")
    big = cached_instance(ps.lowmc)
    rng = np.random.default_rng(11)
    mask = (1 << 129) - 1
    padded_ok = True
    for _ in range(100):
        k = BitString.from_int(int.from_bytes(rng.bytes(17), "little") & mask, 136)
        m = BitString.from_int(int.from_bytes(rng.bytes(17), "little") & mask, 136)
        padded_ok &= decrypt(big, k, encrypt(big, k, m)) == m.resized(129)
    small = instantiate(LowMCParams(n=12, k=12, m=4, r=4, seed=1))
    keys = [0, (1 << 12) - 1] + [int(x) for x in rng.integers(0, 1 << 12, 6)]
    exhaustive_ok = all(
        sorted(encrypt_int(small, key, m) for m in range(1 << 12)) == list(range(1 << 12))
        and all(decrypt_int(small, key, encrypt_int(small, key, m)) == m for m in range(1 << 12))
        for key in keys)
    triples = list(itertools.product((0, 1), repeat=3))
    sbox_ok = sorted(sbox(*t) for t in triples) == triples and all(sbox_inverse(*sbox(*t)) == t for t in triples)
    elapsed = time.perf_counter() - t0
    ok = padded_ok and exhaustive_ok and sbox_ok
    passed = record(7, "LowMC sanity", ok, elapsed, 10,
                    f"[n=129 padded {padded_ok}, n=12 exhaustive over {len(keys)} keys {exhaustive_ok}, "
                    f"S-box {sbox_ok}]")
    assert ok and passed


# 8 -------------------------------------------------------------------------------

def test_channel_statistics():
    true = ChannelParams(0.001, 0.05)
    t0 = time.perf_counter()
    good = 0
    worst = 0.0
    for seed in range(10):
        key = BitString.from_array(np.random.default_rng([seed, 0]).integers(0, 2, 10 ** 6, dtype=np.uint8))
        est = estimate_params(key, perturb(key, true, seed=[seed, 1]))
        err = max(abs(est.alpha / true.alpha - 1), abs(est.beta / true.beta - 1))
        worst = max(worst, err)
        good += err <= 0.2
    elapsed = time.perf_counter() - t0
    passed = record(8, "channel statistics", good == 10, elapsed, 10,
                    f"[{good}/10 seeds within 20%, worst rel err {worst:.3f}]")
    assert good == 10 and passed
