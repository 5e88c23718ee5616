"""Compiled kernel vs pure-Python fallback on identical campaign blocks.

    python3 benchmarks/bench_kernel.py [--repeat 3]

Each workload runs on both backends; the block results must be identical,
and the script exits nonzero if they are not.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from fpf import _pykernel
from fpf.core import unrank_combination

try:
    from fpf import _ckernel
except ImportError:
    _ckernel = None


def _workloads():
    yield "p=3 all 511 sets, audit", (3, 0, 0, 1, 512), dict(audit=True, prune=False, collect=True)
    yield "p=5 all 5-sets (53130)", (5, 1, 5, 0, math.comb(25, 5)), dict(
        collect=True, first_mask=unrank_combination(0, 5, 25)
    )
    yield "p=5 20000 sampled sets, audit", (5, 2, 0, 0, 20_000), dict(seed=1, audit=True, prune=False)
    yield "p=5 2^16 masks from 1, audit", (5, 0, 0, 1, 1 << 16), dict(audit=True, prune=False)
    start = 40_000_000
    yield "p=7 20000 7-sets", (7, 1, 7, start, start + 20_000), dict(
        collect=True, first_mask=unrank_combination(start, 7, 49)
    )


def _best(fn, repeat: int) -> tuple[float, dict]:
    best, out = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _canonical(res: dict) -> tuple:
    return (
        res["tallies"],
        [tuple(int(x) for x in v) for v in res["violations"]],
        [[int(x) for x in res[k]] for k in ("divisibility", "density", "closure")],
        np.asarray(res["spectral_masks"], dtype=np.uint64).tolist(),
    )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernel is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
        return 2
    print(f"{'workload':34} {'cython s':>10} {'python s':>10} {'speedup':>9}  identical")
    mismatch = False
    for name, pos, kw in _workloads():
        tc, rc = _best(lambda: _ckernel.run_block(*pos, **kw), args.repeat)
        tp, rp = _best(lambda: _pykernel.run_block(*pos, **kw), 1)
        same = _canonical(rc) == _canonical(rp)
        mismatch |= not same
        print(f"{name:34} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x  {same}")
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
