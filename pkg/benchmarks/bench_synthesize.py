"""Compare the compiled and pure synthesis kernels on one workload.

Usage: python3 benchmarks/bench_synthesize.py [replicates] [mean_count]
"""

import math
import sys
import time

import numpy as np
from scipy import stats

from pnsc import simulator as sim


def main() -> None:
    replicates = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
    mean_count = float(sys.argv[2]) if len(sys.argv) > 2 else 1000.0
    cfg = sim.FieldConfig(lam=1.0 / math.pi, r_t=math.sqrt(mean_count), sigma=4.0)
    points = replicates * mean_count
    batches = {}
    for kernel in sim.available_kernels():
        t0 = time.perf_counter()
        batches[kernel] = sim.synthesize(cfg, replicates, seed=1234, kernel=kernel)
        dt = time.perf_counter() - t0
        print(
            f"{kernel:>8}: {dt:6.2f} s  {dt / points * 1e9:6.1f} ns/point "
            f"({points:.3g} points)"
        )
    if len(batches) == 2:
        a = batches["compiled"].samples[:, 0].real
        b = batches["pure"].samples[:, 0].real
        p = stats.ks_2samp(a, b).pvalue
        print(f"two-sample KS between kernels: p = {p:.3f}")


if __name__ == "__main__":
    main()
