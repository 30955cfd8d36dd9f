#!/usr/bin/env python3
"""Closed-form fidelities: state estimation vs optimal cloning.

Estimating an unknown d-dimensional state from N copies caps the mean
fidelity at (N+1)/(N+d); cloning N -> M instead keeps quantum coherence
and reaches (M-N+N(M+d))/(M(N+d)), which always wins and only falls back
to the estimation bound as M -> infinity.
"""

from symclone import f_clon, f_est


def main():
    print("1 -> 2 cloning vs single-copy estimation")
    print(f"{'d':>4} {'f_est(1,d)':>12} {'f_clon(1,2,d)':>14} {'advantage':>10}")
    for d in (2, 3, 4, 5, 8, 16, 32):
        est = f_est(1, d)
        clon = f_clon(1, 2, d)
        print(f"{d:>4} {est:>12.4f} {clon:>14.4f} {clon - est:>10.4f}")
    print()
    print("the advantage grows with dimension; for the ququart (d=4):")
    print(f"  f_est(1,4)     = {f_est(1, 4)}")
    print(f"  f_clon(1,2,4)  = {f_clon(1, 2, 4)}")
    print()

    print("more copies out of one input (d=4)")
    print(f"{'M':>6} {'f_clon(1,M,4)':>14}")
    for m in (2, 3, 5, 10, 100, 10**6):
        print(f"{m:>6} {f_clon(1, m, 4):>14.6f}")
    print(f"{'inf':>6} {f_est(1, 4):>14.6f}   (estimation bound)")


if __name__ == "__main__":
    main()
