"""Compare the compiled and numpy assembly kernels.

Times one residual+Jacobian assembly per grid size and one full solve on
the unit geodesic disk with each kernel, and checks that both agree.

    python3 benchmarks/bench_assembly.py [--sizes 64 128 256 512] [--repeat 5]
"""

import argparse
import time

import numpy as np
import scipy.sparse as sp

from h2rcmc.pde import kernels
from h2rcmc.pde.domain import DomainSpec, GeodesicDisk, build_grid
from h2rcmc.pde.solver import solve_dirichlet


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--solve-n", type=int, default=128)
    args = ap.parse_args()
    if kernels.residual_jacobian_c is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")

    print(f"{'n':>5} {'nodes':>8} {'numpy [ms]':>11} {'cython [ms]':>12} {'speedup':>8} {'max|dJ|':>9}")
    rng = np.random.default_rng(1)
    for n in args.sizes:
        g = build_grid(DomainSpec(GeodesicDisk(), n))
        u = 0.05 * rng.standard_normal(g.n_interior)
        rhs = 0.6 * g.F ** 2
        call = (u, g.nb, g.dist, g.Fface, rhs, True)
        tp = best_of(lambda: kernels.residual_jacobian_py(*call), args.repeat)
        tc = best_of(lambda: kernels.residual_jacobian_c(*call), args.repeat)
        rp, jp = kernels.residual_jacobian_py(*call)
        rc, jc = kernels.residual_jacobian_c(*call)
        N = g.n_interior
        Jp = sp.csr_matrix((jp[2], (jp[0], jp[1])), shape=(N, N))
        Jc = sp.csr_matrix((jc[2], (jc[0], jc[1])), shape=(N, N))
        assert np.array_equal(rp, rc)
        dJ = abs(Jp - Jc).max() / abs(Jp).max()
        print(f"{n:5d} {N:8d} {1e3 * tp:11.2f} {1e3 * tc:12.2f} {tp / tc:8.1f} {dJ:9.1e}")

    spec = DomainSpec(GeodesicDisk(), args.solve_n)
    times = {}
    for name in ("python", "cython"):
        kernels.set_kernel(name)
        t0 = time.perf_counter()
        sol = solve_dirichlet(spec, 0.3)
        times[name] = (time.perf_counter() - t0, sol.u)
    kernels.set_kernel("cython")
    du = np.max(np.abs(times["python"][1] - times["cython"][1]))
    print(f"\nfull solve n={args.solve_n}, H=0.3: numpy {times['python'][0]:.2f} s, "
          f"cython {times['cython'][0]:.2f} s, max|du| = {du:.1e}")


if __name__ == "__main__":
    main()
