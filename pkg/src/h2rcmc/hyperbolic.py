"""Points, metric and isometries of H^2 and H^2 x R.

The Poincare disk carries the metric ``F(z)^2 |dz|^2`` with conformal
factor ``F(z) = 2 / (1 - |z|^2)``; the upper halfplane carries
``|dw|^2 / y^2``.  The two are identified by the Cayley map
``w = i (1 + z) / (1 - z)``, which sends the disk origin to ``i``.

Heights ``t`` of H^2 x R are untouched by every map in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class GeometryError(ValueError):
    """A point or parameter lies outside the model it is meant for."""


@dataclass(frozen=True)
class DiskPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite disk coordinates ({self.x}, {self.y})")
        if self.x * self.x + self.y * self.y >= 1.0:
            raise GeometryError(f"({self.x}, {self.y}) is not inside the unit disk")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(z.real, z.imag)


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite halfplane coordinates ({self.x}, {self.y})")
        if self.y <= 0.0:
            raise GeometryError(f"({self.x}, {self.y}) is not in the upper halfplane")

    @property
    def w(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class SpacePoint:
    base: DiskPoint
    t: float

    def __post_init__(self):
        if not isinstance(self.base, DiskPoint):
            raise GeometryError("SpacePoint.base must be a DiskPoint")
        if not math.isfinite(self.t):
            raise GeometryError(f"non-finite height {self.t}")


ORIGIN = DiskPoint(0.0, 0.0)


def conformal_factor(p: DiskPoint) -> float:
    """Conformal factor ``2 / (1 - |p|^2)`` of the disk metric at `p`."""
    return 2.0 / (1.0 - (p.x * p.x + p.y * p.y))


def disk_conformal_factor(x, y):
    """Vectorized conformal factor of the disk model."""
    return 2.0 / (1.0 - (np.asarray(x) ** 2 + np.asarray(y) ** 2))


def halfplane_conformal_factor(x, y):
    """Vectorized conformal factor ``1/y`` of the halfplane model."""
    return 1.0 / np.asarray(y)


def rho_to_disk(rho: float, theta: float = 0.0) -> DiskPoint:
    """Point at hyperbolic distance `rho` from the origin in direction `theta`."""
    if rho < 0:
        raise GeometryError(f"distance must be nonnegative, got {rho}")
    r = math.tanh(rho / 2.0)
    return DiskPoint(r * math.cos(theta), r * math.sin(theta))


def disk_to_rho(p: DiskPoint) -> tuple[float, float]:
    """Geodesic polar coordinates ``(rho, theta)`` of `p` about the origin.

    ``theta`` is 0 at the origin by convention.
    """
    r = math.hypot(p.x, p.y)
    if r == 0.0:
        return 0.0, 0.0
    return 2.0 * math.atanh(r), math.atan2(p.y, p.x)


def geodesic_distance(p: DiskPoint, q: DiskPoint) -> float:
    # 2 artanh |(p - q) / (1 - conj(q) p)| keeps full relative accuracy
    # for nearby points, unlike the arcosh form.
    num = abs(p.z - q.z)
    if num == 0.0:
        return 0.0
    den = abs(1.0 - q.z.conjugate() * p.z)
    return 2.0 * math.atanh(num / den)


def disk_distance_array(x, y, cx: float, cy: float):
    """Distances from each ``(x, y)`` to the disk point ``(cx, cy)``."""
    z = np.asarray(x) + 1j * np.asarray(y)
    c = complex(cx, cy)
    ratio = np.abs(z - c) / np.abs(1.0 - np.conj(c) * z)
    return 2.0 * np.arctanh(ratio)


def halfplane_distance(p: HalfPlanePoint, q: HalfPlanePoint) -> float:
    num = math.hypot(p.x - q.x, p.y - q.y)
    den = math.hypot(p.x - q.x, p.y + q.y)
    return 2.0 * math.atanh(num / den)


def halfplane_distance_array(x, y, cx: float, cy: float):
    x = np.asarray(x)
    y = np.asarray(y)
    num = np.hypot(x - cx, y - cy)
    den = np.hypot(x - cx, y + cy)
    return 2.0 * np.arctanh(num / den)


def translate_along_gamma(p: SpacePoint, s: float) -> SpacePoint:
    """Hyperbolic translation by signed distance `s` along the real diameter.

    Positive `s` pushes points toward the ideal point -1; the height is
    unchanged.  ``T_a(T_b(p)) == T_{a+b}(p)``.
    """
    a = math.tanh(s / 2.0)
    z = p.base.z
    w = (z - a) / (1.0 - a * z)
    return SpacePoint(DiskPoint.from_complex(w), p.t)


def mobius_to_origin(z, c: complex):
    """Disk isometry ``z -> (z - c) / (1 - conj(c) z)`` sending `c` to 0."""
    return (z - c) / (1.0 - np.conj(c) * z)


def mobius_from_origin(z, c: complex):
    """Inverse of :func:`mobius_to_origin`."""
    return (z + c) / (1.0 + np.conj(c) * z)


def reflect_across_geodesic(z, through: complex, angle: float):
    """Reflect disk points across the geodesic through `through` with
    direction `angle` (measured at `through`).

    Works on scalars or arrays of complex numbers.
    """
    w = mobius_to_origin(z, through)
    rot = np.exp(2j * angle)
    return mobius_from_origin(rot * np.conj(w), through)


def disk_to_halfplane(p: DiskPoint) -> HalfPlanePoint:
    w = 1j * (1.0 + p.z) / (1.0 - p.z)
    return HalfPlanePoint(w.real, w.imag)


def halfplane_to_disk(q: HalfPlanePoint) -> DiskPoint:
    z = (q.w - 1j) / (q.w + 1j)
    return DiskPoint(z.real, z.imag)


def disk_to_halfplane_array(z):
    return 1j * (1.0 + z) / (1.0 - z)


def halfplane_to_disk_array(w):
    return (w - 1j) / (w + 1j)
