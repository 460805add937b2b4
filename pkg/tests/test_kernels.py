import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.sparse as sp

from h2rcmc import hyperbolic as hyp
from h2rcmc.pde import DomainSpec, GeodesicDisk, LevelSet, build_grid, kernels, solve_dirichlet

compiled = pytest.mark.skipif(kernels.residual_jacobian_c is None, reason="compiled kernel not built")

DOMAINS = [
    GeodesicDisk((0, 0), 1.0),
    GeodesicDisk((0.3, 0.4), 0.6),
    GeodesicDisk((0.2, 1.3), 0.9, "halfplane"),
    LevelSet(lambda x, y: hyp.disk_distance_array(x, y, 0, 0) - 0.8 - 0.2 * np.cos(3 * np.arctan2(y, x))),
]


def assemble(fn, grid, u, rhs):
    res, (rows, cols, vals) = fn(u, grid.nb, grid.dist, grid.Fface, rhs, True)
    N = len(u)
    return res, sp.csr_matrix((vals, (rows, cols)), shape=(N, N))


def random_state(grid, seed):
    rng = np.random.default_rng(seed)
    u = 0.3 * rng.standard_normal(grid.n_interior)
    rhs = 0.6 * grid.F ** 2
    return u, rhs


@compiled
@pytest.mark.parametrize("kind", DOMAINS)
def test_kernels_agree(kind):
    grid = build_grid(DomainSpec(kind, 40))
    u, rhs = random_state(grid, 3)
    r_py, J_py = assemble(kernels.residual_jacobian_py, grid, u, rhs)
    r_c, J_c = assemble(kernels.residual_jacobian_c, grid, u, rhs)
    assert np.array_equal(r_py, r_c)
    diff = abs(J_py - J_c).max()
    assert diff <= 1e-13 * abs(J_py).max()
    r_only, none = kernels.residual_jacobian_c(u, grid.nb, grid.dist, grid.Fface, rhs, False)
    assert none is None and np.array_equal(r_only, r_c)


@pytest.mark.parametrize("name", ["python", "cython"])
def test_jacobian_matches_finite_differences(name):
    fn = kernels.residual_jacobian_py if name == "python" else kernels.residual_jacobian_c
    if fn is None:
        pytest.skip("compiled kernel not built")
    grid = build_grid(DomainSpec(DOMAINS[3], 32))
    u, rhs = random_state(grid, 5)
    _, J = assemble(fn, grid, u, rhs)
    v = np.random.default_rng(6).standard_normal(len(u))
    eps = 1e-6
    rp, _ = fn(u + eps * v, grid.nb, grid.dist, grid.Fface, rhs, False)
    rm, _ = fn(u - eps * v, grid.nb, grid.dist, grid.Fface, rhs, False)
    fd = (rp - rm) / (2 * eps)
    assert np.max(np.abs(J @ v - fd)) <= 1e-6 * np.max(np.abs(fd))


@compiled
def test_solves_agree_across_kernels():
    spec = DomainSpec(GeodesicDisk((0.1, 0.0), 1.0), 48)
    previous = kernels.KERNEL
    try:
        kernels.set_kernel("python")
        a = solve_dirichlet(spec, 0.4)
        kernels.set_kernel("cython")
        b = solve_dirichlet(spec, 0.4)
    finally:
        kernels.set_kernel(previous)
    assert a.diagnostics()["kernel"] == "python" and b.diagnostics()["kernel"] == "cython"
    assert np.max(np.abs(a.u - b.u)) <= 1e-12


def test_set_kernel_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_kernel("fortran")


@pytest.mark.parametrize("value, expected", [("1", "python"), ("0", None), ("", None)])
def test_environment_selects_kernel(value, expected):
    env = dict(os.environ, H2RCMC_PURE_PYTHON=value)
    out = subprocess.run([sys.executable, "-c", "from h2rcmc.pde import kernels; print(kernels.KERNEL)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    if expected is None:
        expected = "cython" if kernels.residual_jacobian_c is not None else "python"
    assert out == expected
