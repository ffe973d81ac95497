"""Command line interface.

Bit strings travel as lowercase hex, byte 0 first, bit i in position i % 8 of
byte i // 8; pass ``--bits`` when the length is not a multiple of 8.
Exit codes: 0 success, 1 key not found, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .bits import BitString
from .channel import DEFAULT_PRECISION, ChannelParams, perturb
from .costs import GATE_TABLE, cost_report
from .enumeration import CandidateTable, EnumerationParams, generate_candidates
from .harness import ExperimentSpec, default_beta_grid, run_experiment, to_csv
from .lowmc import (LowMCParams, cached_instance, decrypt, encrypt, get_paramset, keygen,
                    paramset_table)
from .rankindex import WeightInterval, create, get_key, rank
from .search import BACKENDS, SearchPlan, TestOracle, qks

NOT_FOUND = 1


def _bits(hexstr, bits):
    return BitString.from_hex(hexstr, bits)


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _channel_args(p):
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--beta", type=float, default=0.05)


def _enum_args(p, W_required=True):
    p.add_argument("--W", type=int, required=W_required)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--key-bits", type=int, default=None)
    p.add_argument("--precision", type=float, default=DEFAULT_PRECISION)


def _lowmc_args(p):
    p.add_argument("--paramset", default="picnic-L1-FS")
    p.add_argument("--n", type=int, help="block bits (overrides the parameter set)")
    p.add_argument("--k", type=int, help="key bits (defaults to n)")
    p.add_argument("--sboxes", type=int)
    p.add_argument("--rounds", type=int)
    p.add_argument("--instance-seed", type=int, default=0)


def _lowmc_params(args) -> LowMCParams:
    base = get_paramset(args.paramset).lowmc
    n = args.n or base.n
    return LowMCParams(n, args.k or n, args.sboxes if args.sboxes is not None else min(base.m, n // 3),
                       args.rounds if args.rounds is not None else base.r, args.instance_seed)


def _read_table(path) -> CandidateTable:
    with open(path) as fh:
        return CandidateTable.from_text(fh.read())


# --- subcommands -----------------------------------------------------------------

def cmd_perturb(args):
    key = _bits(args.key, args.bits)
    noisy = perturb(key, ChannelParams(args.alpha, args.beta), args.seed)
    _emit({"noisy": noisy.hex(), "bits": noisy.length, "flips": (noisy ^ key).bit_count()})


def cmd_enumerate(args):
    noisy = _bits(args.noisy, args.bits)
    W = args.W or noisy.length
    params = EnumerationParams(W, args.w, args.eta, args.mu, args.key_bits)
    table = generate_candidates(noisy.resized(W), params, ChannelParams(args.alpha, args.beta),
                               args.precision)
    text = table.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_rank(args):
    print(rank(_read_table(args.table), WeightInterval(args.b1, args.b2)))


def cmd_getkey(args):
    table = _read_table(args.table)
    interval = WeightInterval(args.b1, args.b2)
    key = get_key(table, create(table, interval), interval, args.r)
    if key is None:
        print("none")
        return NOT_FOUND
    print(key.hex())


def cmd_search(args):
    inst = cached_instance(_lowmc_params(args))
    n, k = inst.params.n, inst.params.k
    if args.noisy:
        if not args.pair:
            raise ValueError("--noisy needs at least one --pair PLAINTEXT:CIPHERTEXT")
        noisy = _bits(args.noisy, args.bits)
        pairs = [tuple(_bits(x, n) for x in p.split(":")) for p in args.pair]
        planted = None
    else:
        # plant a random key and perturb it
        rng = np.random.default_rng([args.seed, 0])
        planted = BitString.from_int(int.from_bytes(rng.bytes((k + 7) // 8), "little") % (1 << k), k)
        msgs = [BitString.from_int(int.from_bytes(rng.bytes((n + 7) // 8), "little") % (1 << n), n)
                for _ in range(args.pairs)]
        pairs = [(m, encrypt(inst, planted, m)) for m in msgs]
        noisy = perturb(planted, ChannelParams(args.alpha, args.beta), [args.seed, 1])
    W = args.W or noisy.length
    params = EnumerationParams(W, args.w, args.eta, args.mu, args.key_bits or min(k, W))
    plan = SearchPlan(args.e, args.backend, params, ChannelParams(args.alpha, args.beta),
                      args.precision, args.seed, cipher_id=args.cipher)
    out = qks(noisy.resized(W), plan, TestOracle(inst, pairs))
    result = out.as_dict()
    if planted is not None:
        result["planted"] = planted.hex()
        result["noisy"] = noisy.hex()
    _emit(result)
    if out.key is None and args.backend != "cost-only":
        return NOT_FOUND


def cmd_estimate(args):
    if args.table:
        _emit({cid: g.as_dict() for cid, g in GATE_TABLE.items()})
        if not args.cipher:
            return
    if not args.cipher:
        raise ValueError("--cipher is required unless --table is given")
    _emit(cost_report(args.cipher, args.e))


def cmd_experiment(args):
    ps = get_paramset(args.paramset)
    spec = ExperimentSpec(ps, alpha=args.alpha,
                          beta_grid=args.beta or default_beta_grid(ps.level),
                          mu_grid=args.mu, e_grid=args.e, trials=args.trials,
                          base_seed=args.seed, precision=args.precision)
    progress = (lambda row: print(row, file=sys.stderr)) if args.verbose else None
    text = to_csv(run_experiment(spec, progress))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_paramsets(args):
    print("name,stateSizeBits,stateSizeBytes,lowmc_n,lowmc_k,lowmc_m,lowmc_r")
    for ps in paramset_table():
        L = ps.lowmc
        print(f"{ps.name},{ps.state_bits},{ps.state_bytes},{L.n},{L.k},{L.m},{L.r}")


def cmd_lowmc_keygen(args):
    ps = get_paramset(args.paramset)
    lp = _lowmc_params(args)
    ps = replace(ps, lowmc=lp) if lp.n == ps.state_bits else ps
    sk, (m, c) = keygen(ps, args.seed, cached_instance(ps.lowmc))
    _emit({"paramset": ps.name, "bits": ps.state_bits, "sk": sk.hex(), "m": m.hex(), "c": c.hex()})


def cmd_lowmc_enc(args):
    inst = cached_instance(_lowmc_params(args))
    key = _bits(args.key, args.key_len or None)
    print(encrypt(inst, key, _bits(args.block, args.block_len or None)).hex())


def cmd_lowmc_dec(args):
    inst = cached_instance(_lowmc_params(args))
    key = _bits(args.key, args.key_len or None)
    print(decrypt(inst, key, _bits(args.block, args.block_len or None)).hex())


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coldboot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perturb", help="pass a key through the asymmetric channel")
    p.add_argument("--key", required=True)
    p.add_argument("--bits", type=int)
    _channel_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("enumerate", help="build the candidate table for a noisy key")
    p.add_argument("--noisy", required=True)
    p.add_argument("--bits", type=int)
    _enum_args(p, W_required=False)
    _channel_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    for name, func in (("rank", cmd_rank), ("getkey", cmd_getkey)):
        p = sub.add_parser(name, help=f"{name} over a weight interval of a saved table")
        p.add_argument("--table", required=True)
        p.add_argument("--b1", type=int, required=True)
        p.add_argument("--b2", type=int, required=True)
        if name == "getkey":
            p.add_argument("--r", type=int, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("search", help="recover a key with the hybrid interval search")
    p.add_argument("--backend", choices=BACKENDS, default="classical")
    p.add_argument("--e", type=int, default=12, help="search the ~2^e best candidates")
    _enum_args(p, W_required=False)
    _channel_args(p)
    _lowmc_args(p)
    p.add_argument("--noisy")
    p.add_argument("--bits", type=int)
    p.add_argument("--pair", action="append", help="PLAINTEXT:CIPHERTEXT hex, repeatable")
    p.add_argument("--pairs", type=int, default=2, help="pairs to generate for a planted key")
    p.add_argument("--cipher", choices=sorted(GATE_TABLE), help="per-query gate counts for cost output")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("estimate", help="Grover gate totals for a cipher circuit")
    p.add_argument("--cipher", choices=sorted(GATE_TABLE))
    p.add_argument("--e", type=float, default=30)
    p.add_argument("--table", action="store_true", help="print the embedded per-query tables")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("experiment", help="success-rate sweep, CSV output")
    p.add_argument("--paramset", default="picnic-L1-FS")
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--beta", type=float, nargs="+")
    p.add_argument("--mu", type=int, nargs="+", default=[256])
    p.add_argument("--e", type=int, nargs="+", default=[30, 40, 50])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--precision", type=float, default=DEFAULT_PRECISION)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("paramsets", help="print the Picnic parameter table")
    p.set_defaults(func=cmd_paramsets)

    lp = sub.add_parser("lowmc", help="LowMC key generation and block encryption")
    lsub = lp.add_subparsers(dest="lowmc_command", required=True)
    p = lsub.add_parser("keygen")
    _lowmc_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lowmc_keygen)
    for name, func in (("enc", cmd_lowmc_enc), ("dec", cmd_lowmc_dec)):
        p = lsub.add_parser(name)
        _lowmc_args(p)
        p.add_argument("--key", required=True)
        p.add_argument("--key-len", type=int)
        p.add_argument("--block", required=True)
        p.add_argument("--block-len", type=int)
        p.set_defaults(func=func)
    p = lsub.add_parser("list")
    p.set_defaults(func=cmd_paramsets)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
