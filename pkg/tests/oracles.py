"""Shared reference solutions for the PDE and flux tests."""

import functools
import math

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from h2rcmc import hyperbolic as hyp
from h2rcmc import profiles as pr
from h2rcmc.pde import DomainSpec, GeodesicDisk, solve_dirichlet


@functools.lru_cache(maxsize=None)
def rotational_graph(H, R):
    """``rho -> lambda(rho) - lambda(R)`` for the entire graph with d = -2H.

    lambda is even and analytic in rho, so Chebyshev interpolation in rho on
    [0, R] reproduces the quadrature values to rounding; the interpolant is
    checked against direct evaluations before it is returned.
    """
    if H == 0:
        return lambda rho: np.zeros_like(np.asarray(rho, dtype=float))
    p = pr.ProfileParams(abs(H), -2 * abs(H))
    k = np.arange(48)
    nodes = 0.5 * R * (1 - np.cos(np.pi * k / 47))
    vals = np.array([pr.lambda_eval(p, r, 1e-13) for r in nodes])
    interp = BarycentricInterpolator(nodes, vals)
    probe = np.linspace(0.013, R - 0.007, 7)
    direct = np.array([pr.lambda_eval(p, r, 1e-13) for r in probe])
    assert np.max(np.abs(interp(probe) - direct)) < 1e-11
    top = vals[-1]
    sign = 1.0 if H > 0 else -1.0
    return lambda rho: sign * (interp(np.asarray(rho, dtype=float)) - top)


def node_distance(sol, center=(0.0, 0.0)):
    """Hyperbolic distance from each interior node to `center` (model coords)."""
    g = sol.grid
    if sol.domain.model == "disk":
        return hyp.disk_distance_array(g.x, g.y, *center)
    return hyp.halfplane_distance_array(g.x, g.y, *center)


def ode_error(sol, center=(0.0, 0.0), radius=1.0):
    exact = rotational_graph(sol.H, radius)(node_distance(sol, center))
    return float(np.max(np.abs(sol.u - exact)))


@functools.lru_cache(maxsize=None)
def solve_disk(H, n, center=(0.0, 0.0), radius=1.0, model="disk"):
    return solve_dirichlet(DomainSpec(GeodesicDisk(center, radius, model), n), H)


def observed_orders(errors):
    return [math.log2(a / b) for a, b in zip(errors, errors[1:])]
