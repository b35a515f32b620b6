#!/usr/bin/env python3
"""Times the numba and numpy kernel backends on the two hot workloads:

  * coef_matrix   -- all four estimators on one panel (the Monte Carlo
                     inner loop, called once per draw);
  * bootstrap     -- 999 stratified replicates of one estimator.

Run from the repo root: python3 benchmarks/bench_kernels.py
"""

import os
import timeit

import numpy as np

from evstudy import DgpConfig, simulate
from evstudy import kernels


def bench(label, fn, number):
    t = timeit.timeit(fn, number=number)
    print(f"  {label:>6}: {t:.3f} s for {number} calls ({1e6 * t / number:.1f} us/call)")
    return t


def main():
    panel = simulate(DgpConfig(seed=1))
    y1 = panel.outcomes[panel.treated]
    y0 = panel.outcomes[~panel.treated]
    rng = np.random.default_rng(0)
    idx1 = rng.integers(0, y1.shape[0], size=(999, y1.shape[0]))
    idx0 = rng.integers(0, y0.shape[0], size=(999, y0.shape[0]))

    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    print(f"panel: {panel.n_units} units x {panel.n_periods} periods; smaller is better\n")

    print("coef_matrix (one Monte Carlo draw):")
    for backend in backends:
        os.environ["EVSTUDY_BACKEND"] = backend
        kernels.coef_matrix(panel.outcomes, panel.treated, panel.t_min)  # warm the jit
        bench(backend, lambda: kernels.coef_matrix(panel.outcomes, panel.treated, panel.t_min), 2000)

    print("\nbootstrap_coefs (999 replicates, twfe):")
    for backend in backends:
        os.environ["EVSTUDY_BACKEND"] = backend
        kernels.bootstrap_coefs(y1, y0, idx1, idx0, panel.t_min, kernels.TWFE)
        bench(backend, lambda: kernels.bootstrap_coefs(y1, y0, idx1, idx0, panel.t_min, kernels.TWFE), 20)


if __name__ == "__main__":
    main()
