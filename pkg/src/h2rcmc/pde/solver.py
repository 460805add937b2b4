"""Newton-continuation solver for the constant mean curvature graph equation.

The equation is solved in the coordinates of the chosen model, where it
reads

    div_E( grad u / W ) = 2 H t F^2,    W = sqrt(1 + |grad u|^2 / F^2),

with ``u = 0`` on the boundary.  ``t`` is walked from 0 (where ``u = 0``
solves the problem) to 1 by adaptive continuation.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import ndimage
from scipy.interpolate import RegularGridInterpolator
from scipy.spatial import cKDTree

from .. import hyperbolic as hyp
from .._io import text_sink
from . import kernels
from .domain import DomainError, DomainSpec, Grid, build_grid, trace_boundary

DEFAULT_TOL = 1e-8
STEP_INIT = 0.25
STEP_FLOOR = 1e-3
H_MAX = 0.5


class SolverError(RuntimeError):
    """Continuation failed; `trace` holds the accepted steps so far."""

    def __init__(self, msg: str, trace: list):
        super().__init__(msg)
        self.trace = list(trace)


class HypothesisWarning(UserWarning):
    """The problem lies outside the range where a solution is guaranteed."""


@dataclass
class GraphSolution:
    domain: DomainSpec
    H: float
    u: np.ndarray
    residual_norm: float
    continuation_trace: list = field(default_factory=list)
    grid: Optional[Grid] = field(default=None, repr=False)
    tol: float = DEFAULT_TOL
    kernel: str = field(default_factory=lambda: kernels.KERNEL)

    def __post_init__(self):
        if self.grid is None:
            self.grid = build_grid(self.domain)

    @property
    def converged(self) -> bool:
        return self.residual_norm <= self.tol

    def u_grid(self) -> np.ndarray:
        """Solution on the full tensor grid, zero outside the domain."""
        U = np.zeros(self.grid.inside.shape)
        r, c = self.grid.ij.T
        U[r, c] = self.u
        return U

    def diagnostics(self) -> dict:
        return {
            "H": self.H,
            "model": self.domain.model,
            "grid_n": self.domain.grid_n,
            "grid_h": self.grid.h,
            "n_interior": self.grid.n_interior,
            "tol": self.tol,
            "residual_norm": self.residual_norm,
            "max_abs_u": float(np.max(np.abs(self.u))) if len(self.u) else 0.0,
            "kernel": self.kernel,
            "continuation_trace": [
                {"t": t, "newton_iters": k, "residual": r}
                for t, k, r in self.continuation_trace
            ],
        }


def _rhs(grid: Grid, H: float, t: float) -> np.ndarray:
    return 2.0 * H * t * grid.F ** 2


def _residual(grid: Grid, u: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    res, _ = kernels.residual_jacobian(u, grid.nb, grid.dist, grid.Fface, rhs, False)
    return res


def operator_residual(grid: Grid, H: float, u: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Discrete operator applied to nodal values `u` minus the right side."""
    return _residual(grid, np.ascontiguousarray(u, dtype=float), _rhs(grid, H, t))


def _jacobian(grid: Grid, u: np.ndarray, rhs: np.ndarray):
    res, (rows, cols, vals) = kernels.residual_jacobian(u, grid.nb, grid.dist, grid.Fface, rhs, True)
    N = len(u)
    J = sp.csc_matrix((vals, (rows, cols)), shape=(N, N))
    return res, J


def _newton(grid: Grid, u: np.ndarray, rhs: np.ndarray, tol: float, max_iter: int = 25):
    """Damped Newton iteration; returns ``(u, iterations, residual, ok)``."""
    res, J = _jacobian(grid, u, rhs)
    norm = float(np.max(np.abs(res))) if len(res) else 0.0
    for it in range(max_iter):
        if norm <= tol:
            return u, it, norm, True
        if not np.isfinite(norm):
            break
        try:
            du = spla.splu(J, permc_spec="MMD_AT_PLUS_A").solve(-res)
        except RuntimeError:
            break
        step = 1.0
        while step >= 1.0 / 64:
            trial = u + step * du
            r_trial = _residual(grid, trial, rhs)
            n_trial = float(np.max(np.abs(r_trial)))
            # Armijo-type sufficient decrease on the max norm
            if np.isfinite(n_trial) and (n_trial <= (1.0 - 1e-4 * step) * norm or n_trial <= tol):
                break
            step *= 0.5
        else:
            return u, it + 1, norm, False
        u = trial
        res, J = _jacobian(grid, u, rhs)
        norm = float(np.max(np.abs(res)))
    return u, max_iter, norm, norm <= tol


def solve_dirichlet(domain: DomainSpec, H: float, tol: float = DEFAULT_TOL,
                    allow_large_H: bool = False, check_curvature: bool = True) -> GraphSolution:
    """Solve the zero-boundary-value graph problem with mean curvature `H`.

    Parameters
    ----------
    domain : DomainSpec
    H : float
        Prescribed mean curvature; ``|H| <= 1/2`` unless `allow_large_H`,
        in which case a warning is issued and the solve is attempted anyway.
    tol : float
        Target max-norm of the discrete residual at ``t = 1``.
    check_curvature : bool
        Warn when the boundary geodesic curvature drops to 1 or below.

    Returns
    -------
    GraphSolution

    Raises
    ------
    SolverError
        If continuation cannot proceed with steps above the floor.
    ValueError
        For inadmissible `H` or `tol`.
    """
    if not (math.isfinite(H) and tol > 0):
        raise ValueError(f"invalid H={H} or tol={tol}")
    if abs(H) > H_MAX:
        if not allow_large_H:
            raise ValueError(f"|H| = {abs(H)} exceeds 1/2; pass allow_large_H to try anyway")
        warnings.warn(f"|H| = {abs(H)} > 1/2: no existence guarantee", HypothesisWarning, stacklevel=2)
    if check_curvature:
        kmin = boundary_curvature_min(domain, 256)
        if kmin <= 1.0:
            warnings.warn(f"boundary geodesic curvature reaches {kmin:.6g} <= 1",
                          HypothesisWarning, stacklevel=2)

    grid = build_grid(domain)
    N = grid.n_interior
    u = np.zeros(N)
    trace: list = []
    t = 0.0
    dt = STEP_INIT
    while t < 1.0:
        t_new = min(1.0, t + dt)
        # the right side is linear in t, so rescaling is a cheap predictor
        guess = u * (t_new / t) if t > 0 else u.copy()
        u_new, iters, rnorm, ok = _newton(grid, guess, _rhs(grid, H, t_new), tol)
        if ok:
            t, u = t_new, u_new
            trace.append((t, iters, rnorm))
            dt = min(STEP_INIT, 2.0 * dt)
            continue
        dt *= 0.5
        if dt < STEP_FLOOR:
            raise SolverError(
                f"continuation stalled at t={t:.6g} (step below {STEP_FLOOR})", trace)
    return GraphSolution(domain, H, u, trace[-1][2], trace, grid, tol)


def pde_residual(sol: GraphSolution, interior_only: bool = False) -> float:
    """Max-norm of the discrete operator minus the right side at ``t = 1``.

    With `interior_only` the nodes adjacent to the boundary are skipped;
    the remaining ones use the plain five-point stencil.
    """
    res = operator_residual(sol.grid, sol.H, sol.u)
    if interior_only:
        res = res[np.all(sol.grid.nb >= 0, axis=1)]
    return float(np.max(np.abs(res))) if len(res) else 0.0


# ---------------------------------------------------------------- curvature

def _spectral_derivatives(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(r)
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k1 = k.copy()
        k1[n // 2] = 0.0
    else:
        k1 = k
    R = np.fft.fft(r)
    d1 = np.fft.ifft(1j * k1 * R).real
    d2 = np.fft.ifft(-(k ** 2) * R).real
    return d1, d2


def _phi_gradient(domain: DomainSpec, z: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    x, y = z.real, z.imag
    gx = (domain.phi(x + eps, y) - domain.phi(x - eps, y)) / (2 * eps)
    gy = (domain.phi(x, y + eps) - domain.phi(x, y - eps)) / (2 * eps)
    return gx + 1j * gy


def boundary_curvature_min(domain: DomainSpec, n_probe: int = 256) -> float:
    """Minimum geodesic curvature of the boundary over `n_probe` samples.

    The boundary is traced along rays from the star center, differentiated
    spectrally in the ray angle, and the Euclidean curvature is converted
    to the hyperbolic one through ``k_g = (k_E + d_n log F) / F`` with the
    outward normal.  Circles of radius R give ``coth R``.
    """
    if n_probe < 8:
        raise ValueError("n_probe must be at least 8")
    z = trace_boundary(domain.kind, n_probe)
    grad = np.abs(_phi_gradient(domain, z))
    if not np.all(np.isfinite(grad)) or np.min(grad) < 1e-8:
        raise DomainError("level-set gradient vanishes on the boundary")
    c = complex(*domain.kind.star_center)
    w = z - c
    r = np.abs(w)
    ang = 2 * np.pi * np.arange(n_probe) / n_probe
    r1, r2 = _spectral_derivatives(r)
    e = np.exp(1j * ang)
    dz = (r1 + 1j * r) * e
    d2z = (r2 - r + 2j * r1) * e
    speed = np.abs(dz)
    kE = np.imag(np.conj(dz) * d2z) / speed ** 3
    normal = -1j * dz / speed
    if domain.model == "disk":
        F = 2.0 / (1.0 - np.abs(z) ** 2)
        glogF = 2.0 * z / (1.0 - np.abs(z) ** 2)
    else:
        F = 1.0 / z.imag
        glogF = -1j / z.imag
    dn = np.real(np.conj(normal) * glogF)
    return float(np.min((kE + dn) / F))


# ---------------------------------------------------------------- symmetry

def _to_disk(model: str, z):
    return z if model == "disk" else hyp.halfplane_to_disk_array(z)


def _from_disk(model: str, z):
    return z if model == "disk" else hyp.disk_to_halfplane_array(z)


def reflect_points(model: str, z, through: complex, angle: float):
    """Reflect model points across the geodesic through `through` whose
    tangent at `through` makes the angle `angle` with the x-axis."""
    if model == "disk":
        return hyp.reflect_across_geodesic(z, through, angle)
    tz = complex(hyp.halfplane_to_disk_array(through))
    # the Cayley map rotates tangent directions by arg of its derivative
    ang = angle + np.angle(2j / (through + 1j) ** 2)
    return hyp.disk_to_halfplane_array(hyp.reflect_across_geodesic(hyp.halfplane_to_disk_array(z), tz, ang))


def _boundary_crossings(g: Grid) -> tuple[np.ndarray, np.ndarray]:
    k, j = np.nonzero(g.nb < 0)
    step = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])[j]
    return g.x[k] + g.dist[k, j] * step[:, 0], g.y[k] + g.dist[k, j] * step[:, 1]


def extended_field(sol: GraphSolution) -> np.ndarray:
    """Tensor-grid solution with ghost values on the outside nodes of every
    cell that meets the domain.

    A ghost value comes from a least-squares plane through the interior
    values and the zero boundary values (at the link crossings) within two
    grid steps, so bilinear interpolation stays second order up to the
    boundary.
    """
    g = sol.grid
    U = sol.u_grid()
    ring = ndimage.binary_dilation(g.inside, structure=np.ones((3, 3), bool)) & ~g.inside
    if not np.any(ring):
        return U
    bx, by = _boundary_crossings(g)
    px = np.concatenate([g.x, bx])
    py = np.concatenate([g.y, by])
    pv = np.concatenate([sol.u, np.zeros(len(bx))])
    tree = cKDTree(np.column_stack([px, py]))
    rows, cols = np.nonzero(ring)
    for r, c in zip(rows, cols):
        qx, qy = g.xs[c], g.ys[r]
        for radius in (2.01, 3.01, 4.01):
            idx = tree.query_ball_point((qx, qy), radius * g.h)
            if len(idx) >= 6:
                break
        A = np.column_stack([np.ones(len(idx)), (px[idx] - qx) / g.h, (py[idx] - qy) / g.h])
        coef = np.linalg.lstsq(A, pv[idx], rcond=None)[0]
        U[r, c] = coef[0]
    return U


def sample_solution(sol: GraphSolution, x, y) -> np.ndarray:
    """Bilinear interpolation of the solution at model points ``(x, y)``."""
    g = sol.grid
    interp = RegularGridInterpolator((g.ys, g.xs), extended_field(sol), method="linear",
                                     bounds_error=False, fill_value=np.nan)
    return interp(np.stack([np.asarray(y, float).ravel(), np.asarray(x, float).ravel()], axis=1))


def symmetry_deviation(sol: GraphSolution, through=(0.0, 0.0), angle: float = 0.0,
                       strict: bool = True) -> float:
    """Max ``|u(p) - u(reflect(p))|`` over interior nodes whose image lies
    in the domain.

    The reflection is across the geodesic through `through` with tangent
    angle `angle` (model coordinates).  With `strict`, a reflection that
    moves the boundary by more than one grid step raises DomainError.
    """
    g = sol.grid
    model = sol.domain.model
    c = complex(*through)
    if strict:
        zb = trace_boundary(sol.domain.kind, 720)
        zr = reflect_points(model, zb, c, angle)
        gap = np.abs(sol.domain.phi(zr.real, zr.imag)) / np.abs(_phi_gradient(sol.domain, zr))
        if np.max(gap) > g.h:
            raise DomainError(f"reflection moves the boundary by {np.max(gap):.3g} > grid step {g.h:.3g}")
    z = g.x + 1j * g.y
    zr = reflect_points(model, z, c, angle)
    keep = sol.domain.phi(zr.real, zr.imag) < 0
    if not np.any(keep):
        return 0.0
    ur = sample_solution(sol, zr.real[keep], zr.imag[keep])
    return float(np.nanmax(np.abs(sol.u[keep] - ur)))


# ---------------------------------------------------------------- export

def write_solution_csv(sol: GraphSolution, path, header: tuple[str, ...] = ()) -> None:
    """Write ``x, y, u`` for every interior node, preceded by ``#`` lines."""
    with text_sink(path) as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "u"])
        for x, y, u in zip(sol.grid.x, sol.grid.y, sol.u):
            w.writerow([f"{x:.17g}", f"{y:.17g}", f"{u:.17g}"])


def write_diagnostics_json(sol: GraphSolution, path, provenance: Optional[dict] = None) -> None:
    doc = {"provenance": provenance or {}, **sol.diagnostics()}
    with text_sink(path) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
