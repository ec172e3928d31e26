"""Time the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Each row reports
the best wall time per backend, the speedup and the largest disagreement.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from grushin import _backend, _pykernels
from grushin.quadrature import composite_gauss_legendre, radial_cutoff
from grushin.heat_kernel import _profile_parts


def cases():
    rng = np.random.default_rng(7)
    u = np.linspace(-12, 12, 4096)
    z = rng.uniform(0, 60, 200_000)
    tau, w = composite_gauss_legendre(0.0, radial_cutoff(1, 2), 400, 10)
    logp, T, C = _profile_parts(tau, 1)
    logw = np.log(w) + logp + np.log(tau)
    a, b, delta = rng.uniform(0, 2, 300), rng.uniform(0, 2, 300), rng.uniform(0, 5, 300)
    return [
        ("hermite_table K=128", lambda m: m.hermite_table(128, u)),
        ("bessel_j alpha=0.5", lambda m: m.bessel_j(0.5, z)),
        ("fiber_cos_sum", lambda m: m.fiber_cos_sum(logw, T, C, tau, a, b, delta)),
        ("fiber_bessel_sum alpha=0", lambda m: m.fiber_bessel_sum(logw, T, C, tau, a, b, delta, 0.0)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if "cython" not in _backend.available():
        print("compiled kernels not built; only the numpy fallback is available")
        return 1
    from grushin import _ckernels

    print(f"{'kernel':<28} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} {'max diff':>10}")
    for name, fn in cases():
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(np.asarray(fn(_pykernels)) - np.asarray(fn(_ckernels)))))
        print(f"{name:<28} {tp:>11.4f} {tc:>11.4f} {tp / tc:>8.2f} {diff:>10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
