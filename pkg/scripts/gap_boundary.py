"""Verdicts on both sides of the N_{k+1} - N_{k-1} in {0, 1, 2} boundaries for Grassmannians."""
from quiveriq.duality import verify_pair
from quiveriq.quiver import AnQuiverSpec as S


def main():
    for N2 in (2, 3, 4):
        for N0 in range(N2 + 1):
            spec = S((1,), N2, N0)
            try:
                rep = verify_pair(spec, 1, (4,), 1)
            except ValueError as exc:
                print(f"{spec}: {exc}")
                continue
            neg = verify_pair(spec, 1, (4,), 1, negative_control=True)
            print(f"{spec}: {rep.case.value:<12} {rep.verdict} (control {neg.verdict})")


if __name__ == "__main__":
    main()
