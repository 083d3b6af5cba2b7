"""Capacity and rate bounds over a small grid of erasure probabilities.

For two files the lower and upper bounds meet the capacity everywhere. For
more files a gap opens, and the extra OT rate only appears once both
channels erase more than a fraction (N - 1) / N of the bits.
"""

from pdt.rates import rate_bounds

GRID = (0.2, 0.4, 0.5, 0.6, 0.8)


def table(N):
    print(f"N = {N}")
    print("  eps1  eps2     r_lb     r_ub     r_ex      c2p")
    for e1 in GRID:
        for e2 in GRID:
            b = rate_bounds(e1, e2, N)
            c2p = "-" if b.c2p is None else f"{b.c2p:.4f}"
            print(f"  {e1:4.2f}  {e2:4.2f}  {b.r_lb:7.4f}  {b.r_ub:7.4f}  {b.r_ex:7.4f}  {c2p:>7}")
    print()


if __name__ == "__main__":
    for N in (2, 3):
        table(N)
