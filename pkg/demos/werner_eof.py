"""Entanglement of formation along the Werner line, optimizer against closed form.

Run: python demos/werner_eof.py [--restarts N]
"""

import argparse
import time

import numpy as np

from choquet_roof import RoofOptions, eof, wootters_eof
from choquet_roof.states import werner_state


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--restarts", type=int, default=32)
    args = ap.parse_args()

    print(f"{'p':>5} {'roof':>12} {'closed form':>12} {'|diff|':>9} {'time':>7}")
    for p in np.arange(1, 10) / 10:
        W = werner_state(p)
        t = time.perf_counter()
        res = eof(W, opts=RoofOptions(restarts=args.restarts))
        dt = time.perf_counter() - t
        ref = wootters_eof(W)
        print(f"{p:5.1f} {res.value:12.9f} {ref:12.9f} {abs(res.value - ref):9.1e} {dt:6.2f}s")
    # below p = 1/3 the state is separable and both columns sit at zero


if __name__ == "__main__":
    main()
