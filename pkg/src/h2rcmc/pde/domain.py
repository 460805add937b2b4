"""Plane domains for the graph Dirichlet problem and their Cartesian grids.

A domain is described by a level-set function ``phi`` (negative inside) in
the coordinates of one model of H^2 -- the Poincare disk (``"disk"``) or
the upper halfplane (``"halfplane"``) -- together with a point from which
the boundary is star-shaped; the boundary is traced along rays from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .. import hyperbolic as hyp

MODELS = ("disk", "halfplane")
THETA_MIN = 1e-6


class DomainError(ValueError):
    pass


def conformal_factor_fn(model: str) -> Callable:
    if model == "disk":
        return hyp.disk_conformal_factor
    if model == "halfplane":
        return hyp.halfplane_conformal_factor
    raise DomainError(f"unknown model {model!r}")


@dataclass(frozen=True)
class GeodesicDisk:
    """Hyperbolic disk of radius `radius` about `center` (model coordinates)."""

    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0
    model: str = "disk"

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        cx, cy = self.center
        if self.model == "disk":
            hyp.DiskPoint(cx, cy)
        else:
            hyp.HalfPlanePoint(cx, cy)

    def phi(self, x, y):
        cx, cy = self.center
        if self.model == "disk":
            return hyp.disk_distance_array(x, y, cx, cy) - self.radius
        return hyp.halfplane_distance_array(x, y, cx, cy) - self.radius

    @property
    def star_center(self) -> tuple[float, float]:
        return self.center

    def euclidean_circle(self) -> tuple[complex, float]:
        """Euclidean center and radius of the boundary circle."""
        cx, cy = self.center
        R = self.radius
        if self.model == "halfplane":
            return complex(cx, cy * math.cosh(R)), cy * math.sinh(R)
        c = complex(cx, cy)
        r = abs(c)
        u = c / r if r > 0 else 1.0
        rho = 2.0 * math.atanh(r)
        a = math.tanh((rho + R) / 2.0)
        b = math.tanh((rho - R) / 2.0)
        return u * (a + b) / 2.0, (a - b) / 2.0

    def bbox(self) -> tuple[float, float, float, float]:
        c, r = self.euclidean_circle()
        return c.real - r, c.real + r, c.imag - r, c.imag + r


@dataclass(frozen=True)
class LevelSet:
    """Domain ``{phi < 0}``; `phi` must be vectorized over numpy arrays."""

    phi_fn: Callable
    center: tuple[float, float] = (0.0, 0.0)
    model: str = "disk"
    name: str = "levelset"

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        if not float(self.phi_fn(np.array(self.center[0]), np.array(self.center[1]))) < 0:
            raise DomainError("the star center must lie inside the domain")

    def phi(self, x, y):
        return self.phi_fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    @property
    def star_center(self) -> tuple[float, float]:
        return self.center

    def bbox(self) -> tuple[float, float, float, float]:
        pts = trace_boundary(self, 1440)
        pad = 1e-3 * max(np.ptp(pts.real), np.ptp(pts.imag))
        return (pts.real.min() - pad, pts.real.max() + pad,
                pts.imag.min() - pad, pts.imag.max() + pad)


Shape = Union[GeodesicDisk, LevelSet]


@dataclass(frozen=True)
class DomainSpec:
    kind: Shape
    grid_n: int = 128

    def __post_init__(self):
        if not 8 <= self.grid_n <= 2048:
            raise DomainError(f"grid_n must lie in [8, 2048], got {self.grid_n}")

    @property
    def model(self) -> str:
        return self.kind.model

    def phi(self, x, y):
        return self.kind.phi(x, y)

    def with_grid(self, n: int) -> "DomainSpec":
        return DomainSpec(self.kind, n)


def _ray_limit(shape: Shape, directions: np.ndarray) -> np.ndarray:
    cx, cy = shape.star_center
    if shape.model == "disk":
        # distance from the center to the unit circle along each ray
        c = complex(cx, cy)
        b = (np.conj(directions) * c).real
        return -b + np.sqrt(b * b + 1.0 - abs(c) ** 2)
    lim = np.full(directions.shape, 1e3 * max(1.0, cy))
    down = directions.imag < 0
    lim[down] = np.minimum(lim[down], cy / -directions.imag[down])
    return lim


def bisect_roots(fn: Callable, lo: np.ndarray, hi: np.ndarray, iters: int = 64) -> np.ndarray:
    """Vectorized bisection for sign changes of `fn` with fn(lo) < 0 <= fn(hi)."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = fn(mid) < 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


def trace_boundary(shape: Shape, n: int) -> np.ndarray:
    """Boundary points (complex) at `n` equally spaced ray angles."""
    cx, cy = shape.star_center
    c = complex(cx, cy)
    ang = 2 * np.pi * np.arange(n) / n
    e = np.exp(1j * ang)
    lim = _ray_limit(shape, e) * (1 - 1e-12)
    outside = shape.phi((c + lim * e).real, (c + lim * e).imag)
    if np.any(outside <= 0):
        raise DomainError("domain is not compactly contained in the model")

    def f(r):
        p = c + r * e
        return shape.phi(p.real, p.imag)

    r = bisect_roots(f, np.zeros(n), lim)
    return c + r * e


@dataclass
class Grid:
    """Interior nodes of a uniform grid with Shortley-Weller link lengths.

    ``nb[k, j]`` is the interior index of the neighbour of node ``k`` in
    direction ``j`` (E, W, N, S) or -1 if the link crosses the boundary,
    in which case ``dist[k, j] = theta * h`` is the distance to the crossing.
    """

    spec: DomainSpec
    xs: np.ndarray
    ys: np.ndarray
    h: float
    inside: np.ndarray          # (ny, nx) bool
    index: np.ndarray           # (ny, nx) int, -1 outside
    ij: np.ndarray              # (N, 2) node (row, col)
    nb: np.ndarray              # (N, 4) int
    dist: np.ndarray            # (N, 4) float
    F: np.ndarray               # (N,) conformal factor at nodes
    Fface: np.ndarray           # (N, 4) conformal factor at face midpoints
    x: np.ndarray = field(repr=False, default=None)
    y: np.ndarray = field(repr=False, default=None)

    @property
    def n_interior(self) -> int:
        return len(self.ij)


DIRS = np.array([[0, 1], [0, -1], [1, 0], [-1, 0]])  # (drow, dcol) for E, W, N, S


def build_grid(spec: DomainSpec) -> Grid:
    x0, x1, y0, y1 = spec.kind.bbox()
    L = max(x1 - x0, y1 - y0)
    n = spec.grid_n
    h = L / n
    cxm, cym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    xs = cxm + h * (np.arange(n + 1) - n / 2)
    ys = cym + h * (np.arange(n + 1) - n / 2)
    X, Y = np.meshgrid(xs, ys)
    if spec.model == "disk":
        valid = X ** 2 + Y ** 2 < 1.0
    else:
        valid = Y > 0
    phi = np.full(X.shape, np.inf)
    phi[valid] = spec.phi(X[valid], Y[valid])
    inside = phi < 0
    inside[[0, -1], :] = False
    inside[:, [0, -1]] = False

    while True:
        rows, cols = np.nonzero(inside)
        N = len(rows)
        theta = np.ones((N, 4))
        for j, (dr, dc) in enumerate(DIRS):
            out = ~inside[rows + dr, cols + dc]
            if not np.any(out):
                continue
            px, py = xs[cols[out]], ys[rows[out]]
            qx, qy = xs[cols[out] + dc], ys[rows[out] + dr]

            def f(s, px=px, py=py, qx=qx, qy=qy):
                return spec.phi(px + s * (qx - px), py + s * (qy - py))

            # the far node may sit outside the model itself; cap the search
            hi = np.ones(out.sum())
            if spec.model == "disk":
                bad = qx ** 2 + qy ** 2 >= 1.0
            else:
                bad = qy <= 0
            hi[bad] = 0.999
            theta[out, j] = bisect_roots(f, np.zeros(out.sum()), hi)
        tiny = np.any(theta < THETA_MIN, axis=1)
        if not np.any(tiny):
            break
        inside[rows[tiny], cols[tiny]] = False

    if N == 0:
        raise DomainError("grid has no interior nodes; increase grid_n")
    index = np.full(X.shape, -1, dtype=np.int64)
    index[rows, cols] = np.arange(N)
    nb = np.empty((N, 4), dtype=np.int64)
    for j, (dr, dc) in enumerate(DIRS):
        nb[:, j] = index[rows + dr, cols + dc]
    dist = theta * h
    Ffn = conformal_factor_fn(spec.model)
    px, py = xs[cols], ys[rows]
    F = Ffn(px, py)
    Fface = np.empty((N, 4))
    for j, (dr, dc) in enumerate(DIRS):
        Fface[:, j] = Ffn(px + 0.5 * dist[:, j] * dc, py + 0.5 * dist[:, j] * dr)
    return Grid(spec=spec, xs=xs, ys=ys, h=h, inside=inside, index=index,
                ij=np.stack([rows, cols], axis=1), nb=nb, dist=dist, F=F, Fface=Fface,
                x=px, y=py)
