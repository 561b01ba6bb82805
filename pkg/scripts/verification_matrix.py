"""Pass/fail matrix over duality instances and seeds, with negative controls."""
import argparse
import time

from quiveriq.duality import verify_pair
from quiveriq.quiver import AnQuiverSpec as S

INSTANCES = [
    (S((1,), 3), 1, (5,)),
    (S((1,), 2, 1), 1, (6,)),
    (S((1,), 2, 2), 1, (5,)),
    (S((1, 2), 3), 1, (3, 3)),
    (S((1, 2), 3), 2, (3, 3)),
    (S((2, 3), 3), 2, (2, 2)),
    (S((1, 2), 3, 1), 2, (2, 2)),
    (S((1, 2), 3, 2), 1, (4, 3)),
    (S((1, 1), 1), 2, (3, 3)),
    (S((1, 2, 3), 4), 2, (2, 2, 2)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    for spec, k, caps in INSTANCES:
        t = time.perf_counter()
        reps = [verify_pair(spec, k, caps, s) for s in args.seeds]
        neg = verify_pair(spec, k, caps, args.seeds[0], negative_control=True)
        cells = " ".join(r.verdict for r in reps)
        print(f"{str(spec):<20} k={k} {reps[0].case.value:<12} caps={caps}: {cells} "
              f"| control {neg.verdict} | window {reps[0].window_size} "
              f"| {time.perf_counter() - t:.2f}s")


if __name__ == "__main__":
    main()
