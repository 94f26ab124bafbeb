"""Numba kernels vs the pure-numpy fallback.

Each mode runs in its own interpreter, because QSING_DISABLE_NUMBA is read
once at import time. Numba timings exclude compilation (one warm-up call).

    python benchmarks/bench_kernels.py --max-dim 5 --repeat 3
"""

import argparse
import json
import os
import subprocess
import sys
import time


def worker(max_dim, repeat):
    import numpy as np

    from qsing import _kernels
    from qsing.poset import enumerate_types
    from qsing.quiver import Quiver, QuiverSetting, canonicalize

    rng = np.random.default_rng(7)
    mats = [rng.integers(0, 3, size=(n, n)) for n in (4, 6, 8) for _ in range(50)]
    settings = [QuiverSetting(Quiver(m), [1] * m.shape[0]) for m in mats]

    def best(fn):
        fn()  # warm-up / jit compile
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        return min(times)

    out = {
        "reachability x150": best(lambda: [_kernels.reachability(m) for m in mats]),
        "canonicalize x150": best(lambda: [canonicalize(s) for s in settings]),
    }
    for D in range(3, max_dim + 1):
        out[f"enumerate D={D}"] = best(lambda: enumerate_types(D))
    print(json.dumps(out))


def run_mode(disabled, max_dim, repeat):
    env = dict(os.environ)
    env["QSING_DISABLE_NUMBA"] = "1" if disabled else "0"
    cmd = [sys.executable, __file__, "--worker", "--max-dim", str(max_dim), "--repeat", str(repeat)]
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-dim", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.max_dim, args.repeat)
        return

    fast = run_mode(False, args.max_dim, args.repeat)
    slow = run_mode(True, args.max_dim, args.repeat)
    print(f"{'benchmark':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    print("-" * 56)
    for key in fast:
        ratio = slow[key] / fast[key] if fast[key] > 0 else float("inf")
        print(f"{key:<22}{fast[key]:>12.4f}{slow[key]:>12.4f}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
