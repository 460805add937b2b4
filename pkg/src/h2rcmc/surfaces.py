"""Surfaces of revolution about the vertical axis through the disk origin.

A profile ``(rho, lambda(rho))`` in a vertical geodesic plane is rotated
about ``{0} x R``: vertex ``(i, j)`` sits over ``rho_to_disk(rho_i, theta_j)``
at height ``lambda_i``.  Meshes are exported in raw disk-model coordinates
``(x, y, t)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from . import hyperbolic as hyp
from ._io import text_sink
from .profiles import (Extension, FamilyClass, ProfileCurve, ProfileParams,
                       first_integral_residual, lambda_increment)


@dataclass(frozen=True)
class RotationalMesh:
    """Triangulated surface of revolution.

    ``points`` holds ``(x, y, t)`` per vertex (disk-model base point and
    height); ``faces`` holds zero-based vertex triples.
    """

    points: np.ndarray
    faces: np.ndarray
    params: ProfileParams
    source: Optional[ProfileCurve] = field(default=None, repr=False)
    extension: Extension = Extension.NONE

    @property
    def vertices(self) -> list:
        return [hyp.SpacePoint(hyp.DiskPoint(x, y), t) for x, y, t in self.points]

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    def edges(self) -> np.ndarray:
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges()) + len(self.faces)

    def boundary_edge_count(self) -> int:
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        _, counts = np.unique(np.sort(e, axis=1), axis=0, return_counts=True)
        return int(np.sum(counts == 1))


def profile_interpolant(profile: ProfileCurve) -> CubicHermiteSpline:
    """Monotone cubic ``rho -> lambda`` through the samples.

    Interior slopes are the PCHIP ones; at either end the exact lambda' is
    used when it is finite and keeps the piece monotone (at most three times
    the secant, with the same sign).
    """
    rho, lam = profile.rho, profile.lam
    if len(rho) < 2:
        raise ValueError("need at least two samples")
    slopes = PchipInterpolator(rho, lam).derivative()(rho)
    for end, nb in ((0, 1), (-1, -2)):
        exact = profile.lam_prime[end]
        secant = (lam[nb] - lam[end]) / (rho[nb] - rho[end])
        if np.isfinite(exact) and exact * secant >= 0 and abs(exact) <= 3 * abs(secant):
            slopes[end] = exact
    return CubicHermiteSpline(rho, lam, slopes)


def revolve(profile: ProfileCurve, n_theta: int = 64, extended: bool = False) -> RotationalMesh:
    """Rotate the profile (or its symmetric extension) about the axis.

    Samples at ``rho = 0`` become a single axis vertex joined to the
    neighbouring ring by a triangle fan; every other sample becomes a ring
    of `n_theta` vertices.
    """
    if n_theta < 3:
        raise ValueError(f"n_theta must be at least 3, got {n_theta}")
    if extended:
        rho, lam = profile.extended()
    else:
        rho, lam = profile.rho, profile.lam
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    ct, st = np.cos(theta), np.sin(theta)

    pts = []
    rings = []          # per sample: array of vertex ids (length 1 on the axis)
    nv = 0
    for r, t in zip(rho, lam):
        if r == 0.0:
            pts.append(np.array([[0.0, 0.0, t]]))
            rings.append(np.array([nv]))
            nv += 1
        else:
            q = math.tanh(0.5 * r)
            pts.append(np.column_stack([q * ct, q * st, np.full(n_theta, t)]))
            rings.append(nv + np.arange(n_theta))
            nv += n_theta

    nxt = np.roll(np.arange(n_theta), -1)
    faces = []
    for a, b in zip(rings[:-1], rings[1:]):
        if len(a) == 1 and len(b) == 1:
            continue
        if len(a) == 1:
            faces.append(np.column_stack([np.full(n_theta, a[0]), b, b[nxt]]))
        elif len(b) == 1:
            faces.append(np.column_stack([a, np.full(n_theta, b[0]), a[nxt]]))
        else:
            faces.append(np.column_stack([a, b, b[nxt]]))
            faces.append(np.column_stack([a, b[nxt], a[nxt]]))
    F = np.concatenate(faces) if faces else np.empty((0, 3), dtype=np.int64)
    return RotationalMesh(points=np.concatenate(pts), faces=F.astype(np.int64),
                          params=profile.params, source=profile,
                          extension=profile.extension)


def mean_curvature_residual(profile: ProfileCurve) -> float:
    """Max over samples of ``|sinh rho lambda'/sqrt(1+lambda'^2) - 2H cosh rho - d|``."""
    p = profile.params
    if not np.any(np.isfinite(profile.lam_prime)):
        raise ValueError("profile has no finite-slope sample")
    return float(np.max(first_integral_residual(p.H, p.d, profile.rho, profile.lam_prime)))


def graph_equation_residual(profile: ProfileCurve, h_step: float, margin: float = 0.05,
                            tol: float = 1e-13) -> float:
    """Max deviation of ``div(grad u / W)`` from ``2H`` for ``u(rho) = lambda(rho)``.

    For a radial function the operator is
    ``(sinh(rho) u' / sqrt(1 + u'^2))' / sinh(rho)``; both derivatives are
    replaced by centered differences with step `h_step`, using only values
    of lambda (differences come from direct quadrature between stencil
    points).  Samples within ``margin`` times the sampled span of either
    end, where the slope blows up, are skipped.
    """
    p = profile.params
    if p.family is FamilyClass.MinimalSlice:
        return 0.0
    if not h_step > 0:
        raise ValueError("h_step must be positive")
    rho = profile.rho
    lo, hi = rho[0], rho[-1]
    pad = margin * (hi - lo)
    pts = rho[(rho - h_step >= lo + pad) & (rho + h_step <= hi - pad)]
    if len(pts) == 0:
        raise ValueError("no interior samples for this step and margin")
    worst = 0.0
    for r in pts:
        dp = lambda_increment(p, r, r + h_step, tol) / h_step
        dm = lambda_increment(p, r - h_step, r, tol) / h_step
        phi_p = math.sinh(r + 0.5 * h_step) * dp / math.hypot(1.0, dp)
        phi_m = math.sinh(r - 0.5 * h_step) * dm / math.hypot(1.0, dm)
        div = (phi_p - phi_m) / (h_step * math.sinh(r))
        worst = max(worst, abs(div - 2.0 * p.H))
    return worst


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def export_obj(mesh: RotationalMesh, path, header: tuple[str, ...] = ()) -> None:
    """ASCII OBJ: ``v x y t`` lines then 1-based ``f i j k`` lines."""
    with text_sink(path) as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for x, y, t in mesh.points:
            fh.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(t)}\n")
        for i, j, k in mesh.faces + 1:
            fh.write(f"f {i} {j} {k}\n")


def export_csv(profile: ProfileCurve, path, header: tuple[str, ...] = ()) -> None:
    """CSV with columns ``rho,lambda,lambda_prime``; vertical slopes are
    written as ``inf``/``-inf``."""
    with text_sink(path) as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rho", "lambda", "lambda_prime"])
        for r, lam, lp in zip(profile.rho, profile.lam, profile.lam_prime):
            w.writerow([_fmt(r), _fmt(lam), _fmt(lp)])


def read_profile_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of :func:`export_csv`: arrays ``(rho, lambda, lambda_prime)``."""
    rows = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    head = next(reader)
    if head != ["rho", "lambda", "lambda_prime"]:
        raise ValueError(f"unexpected header {head}")
    for row in reader:
        rows.append([float(v) for v in row])
    a = np.array(rows, dtype=float).reshape(-1, 3)
    return a[:, 0], a[:, 1], a[:, 2]
