"""Grover gate totals for the LowMC circuits next to the published figures."""
import argparse

from coldboot.costs import PUBLISHED_GROVER_TOTALS, CLIFF1Q_NOTE, builtin_gate_counts, grover_cost


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e", type=int, nargs="+", default=[30, 40, 50])
    args = ap.parse_args()

    print(f"{'e':>3} {'level':<9} {'CNOT':>10} {'pub':>10} {'1qCliff':>10} {'pub':>10} {'T':>10} {'pub':>10}")
    for e in args.e:
        for level in ("lowmc-L1", "lowmc-L3", "lowmc-L5"):
            got = grover_cost(builtin_gate_counts(level), e).rounded()
            pub = PUBLISHED_GROVER_TOTALS.get((level, e))
            cells = []
            for g in ("cnot", "cliff1q", "t"):
                cells.append(f"{getattr(got, g):10.3g}")
                cells.append(f"{getattr(pub, g):10.3g}" if pub else f"{'-':>10}")
            print(f"{e:>3} {level:<9} " + " ".join(cells))
    print(f"\nnote: {CLIFF1Q_NOTE}")


if __name__ == "__main__":
    main()
