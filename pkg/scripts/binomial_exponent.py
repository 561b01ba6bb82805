"""Compare the Equal-rank degree relation with binomial exponent alpha vs alpha-1."""
import argparse
from itertools import combinations

from quiveriq.oracle import relation_equal
from quiveriq.quiver import AnQuiverSpec as S
from quiveriq.quiver import sample_params


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    for N1, N2 in ((1, 2), (1, 3), (2, 3)):
        for shift in (0, -1):
            held = []
            for seed in args.seeds:
                p = sample_params(S((N1,), N2, N2), seed, args.max_degree)
                for fp in combinations(range(1, N2 + 1), N1):
                    held += [relation_equal(N2, N1, N2, fp, p, d, alpha_shift=shift)
                             for d in range(args.max_degree + 1)]
            print(f"N=({N2},{N1},{N2}) shift {shift:+d}: {sum(held)}/{len(held)} relations hold")


if __name__ == "__main__":
    main()
