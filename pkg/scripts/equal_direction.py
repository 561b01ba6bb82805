"""Which q'_(k-1) direction survives in the plain Equal case, per instance."""
import argparse

from quiveriq.duality import resolve_equal_direction
from quiveriq.quiver import AnQuiverSpec as S

INSTANCES = [
    (S((2, 2), 2), 2, (3, 3)),
    (S((1, 1), 1), 2, (3, 3)),
    (S((1, 1, 1), 2), 2, (2, 2, 2)),
    (S((1, 1, 1), 1), 2, (2, 2, 2)),
    (S((2, 2, 2), 3), 2, (2, 2, 1)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2])
    args = ap.parse_args()
    for spec, k, caps in INSTANCES:
        res = resolve_equal_direction(spec, k, caps, args.seeds)
        ok = [d for d, v in res.items() if v]
        print(f"{spec} k={k} caps={caps}: passing {ok}")


if __name__ == "__main__":
    main()
