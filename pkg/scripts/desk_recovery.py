"""Plant keys in a 16-bit LowMC toy, perturb them, and recover them with every backend."""
import argparse

import numpy as np

from coldboot.bits import BitString
from coldboot.channel import ChannelParams, perturb
from coldboot.enumeration import EnumerationParams, generate_candidates
from coldboot.lowmc import LowMCParams, encrypt, instantiate
from coldboot.search import SearchPlan, TestOracle, qks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=10)
    ap.add_argument("--beta", type=float, default=0.05)
    ap.add_argument("--e", type=int, default=12)
    ap.add_argument("--mu", type=int, default=16)
    args = ap.parse_args()

    cipher = instantiate(LowMCParams(n=16, k=16, m=2, r=4, seed=7))
    channel = ChannelParams(0.001, args.beta)
    params = EnumerationParams(16, 4, 2, args.mu)
    for seed in range(args.instances):
        rng = np.random.default_rng(seed)
        key = BitString.from_int(int(rng.integers(0, 1 << 16)), 16)
        msgs = [BitString.from_int(int(rng.integers(0, 1 << 16)), 16) for _ in range(2)]
        oracle = TestOracle(cipher, [(m, encrypt(cipher, key, m)) for m in msgs])
        noisy = perturb(key, channel, seed=[seed, 1])
        table = generate_candidates(noisy, params, channel)
        line = [f"seed={seed:3d} key={key.hex()} noisy={noisy.hex()} flips={(key ^ noisy).bit_count()}"]
        for backend in ("classical", "grover-sim", "cost-only"):
            out = qks(noisy, SearchPlan(args.e, backend, params, channel, seed=seed), oracle, table)
            hit = "-" if out.key is None else ("ok" if out.key == key else "wrong")
            line.append(f"{backend}:{hit}/{out.oracle_queries}q")
        print("  ".join(line))


if __name__ == "__main__":
    main()
