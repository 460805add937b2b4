"""Rotational constant mean curvature surfaces in H^2 x R.

A rotational H-surface about the vertical axis through the disk origin is
generated by a curve ``t = lambda(rho)`` in a vertical geodesic plane,
where ``rho`` is the hyperbolic distance to the axis.  The curve satisfies
the first integral

    sinh(rho) * lambda' / sqrt(1 + lambda'^2) = d + 2 H cosh(rho),

so that ``lambda' = g / sqrt(f)`` with

    g(rho) = d + 2 H cosh(rho),
    f(rho) = sinh(rho)^2 - g(rho)^2.

``f`` is a polynomial of degree <= 2 in ``c = cosh(rho)``.  Every integral
below is evaluated on the factored form of ``f`` so that its simple zeros at
``rho1`` (and ``rho2``) are resolved without cancellation, and the
endpoint singularity ``1/sqrt(rho - rho1)`` is removed with the substitution
``rho = rho1 + tau^2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

DEFAULT_TOL = 1e-10
DEFAULT_RHO_MAX = 15.0
EQ_RTOL = 1e-12


class ProfileError(ValueError):
    """Raised for parameters or radii outside the admissible set."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


class FamilyClass(enum.Enum):
    MinimalSlice = "MinimalSlice"
    MinimalCatenoid = "MinimalCatenoid"
    EmbeddedAnnulus = "EmbeddedAnnulus"
    EntireGraph = "EntireGraph"
    ImmersedAnnulus = "ImmersedAnnulus"
    Sphere = "Sphere"
    Unduloid = "Unduloid"
    Nodoid = "Nodoid"
    Cylinder = "Cylinder"
    Inadmissible = "Inadmissible"


class Extension(enum.Enum):
    NONE = "None"
    REFLECT_ACROSS_SLICE = "ReflectAcrossSlice"
    PERIODIC_VERTICAL = "PeriodicVertical"


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= EQ_RTOL * max(1.0, abs(a), abs(b))


def normalize(H: float, d: float) -> tuple[float, float]:
    """Apply the reflection ``t -> -t``, which maps ``(H, d)`` to ``(-H, -d)``,
    so that ``H >= 0`` (and ``d >= 0`` when ``H == 0``)."""
    if H < 0 or (H == 0 and d < 0):
        return -H, -d
    return H, d


def classify(H: float, d: float) -> FamilyClass:
    """Family of the complete rotational surface with parameters ``(H, d)``.

    Boundary values of ``d`` (and ``H`` at 0 and 1/2) are matched with a
    relative tolerance of 1e-12.
    """
    H, d = normalize(H, d)
    if _close(H, 0.0):
        return FamilyClass.MinimalSlice if _close(d, 0.0) else FamilyClass.MinimalCatenoid
    if _close(H, 0.5):
        if d >= 0 and not _close(d, 0.0):
            return FamilyClass.Inadmissible
        if _close(d, 0.0):
            return FamilyClass.Inadmissible
        if _close(d, -1.0):
            return FamilyClass.EntireGraph
        return FamilyClass.EmbeddedAnnulus if d > -1.0 else FamilyClass.ImmersedAnnulus
    if H < 0.5:
        if _close(d, -2 * H):
            return FamilyClass.EntireGraph
        return FamilyClass.EmbeddedAnnulus if d > -2 * H else FamilyClass.ImmersedAnnulus
    cyl = -math.sqrt(4 * H * H - 1)
    if _close(d, cyl):
        return FamilyClass.Cylinder
    if d > cyl:
        return FamilyClass.Inadmissible
    if _close(d, -2 * H):
        return FamilyClass.Sphere
    return FamilyClass.Unduloid if d > -2 * H else FamilyClass.Nodoid


def classify_vanishing_Q(H: float) -> tuple[FamilyClass, ...]:
    """Rotational surfaces whose Abresch-Rosenberg differential vanishes.

    Returns one class, or two for ``0 < H < 1/2`` where both the entire
    graph ``S^H`` and the embedded annulus with ``d = 2H`` occur.
    """
    H = abs(H)
    if _close(H, 0.0):
        return (FamilyClass.MinimalSlice,)
    if _close(H, 0.5):
        return (FamilyClass.EntireGraph,)
    if H > 0.5:
        return (FamilyClass.Sphere,)
    return (FamilyClass.EntireGraph, FamilyClass.EmbeddedAnnulus)


def vanishing_Q_parameters(H: float) -> tuple[tuple[float, float], ...]:
    """``(H, d)`` pairs realizing :func:`classify_vanishing_Q`."""
    H = abs(H)
    if _close(H, 0.0):
        return ((0.0, 0.0),)
    if H < 0.5 and not _close(H, 0.5):
        return ((H, -2 * H), (H, 2 * H))
    return ((H, -2 * H),)


@dataclass(frozen=True)
class ProfileParams:
    """Admissible ``(H, d)`` pair, normalized to ``H >= 0``.

    Values of ``d`` within the equality tolerance of a special value
    (``-2H``, ``-sqrt(4H^2 - 1)``, ``0`` for ``H = 0``) are snapped onto it.
    """

    H: float
    d: float
    family: FamilyClass = field(init=False)

    def __post_init__(self):
        H, d = normalize(float(self.H), float(self.d))
        fam = classify(H, d)
        if fam is FamilyClass.Inadmissible:
            raise ProfileError(_inadmissible_reason(H, d))
        if _close(H, 0.0):
            H, d = 0.0, abs(d)
        elif _close(H, 0.5):
            H = 0.5
        if fam is FamilyClass.MinimalSlice:
            d = 0.0
        elif fam in (FamilyClass.EntireGraph, FamilyClass.Sphere):
            d = -2 * H
        elif fam is FamilyClass.Cylinder:
            d = -math.sqrt(4 * H * H - 1)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "family", fam)

    @property
    def quad_coeff(self) -> float:
        """Leading coefficient ``1 - 4H^2`` of f as a polynomial in cosh."""
        return 1.0 - 4.0 * self.H * self.H

    @property
    def regular_at_axis(self) -> bool:
        return self.family in (FamilyClass.EntireGraph, FamilyClass.Sphere,
                               FamilyClass.MinimalSlice)


def _inadmissible_reason(H: float, d: float) -> str:
    if _close(H, 0.5):
        return f"H = 1/2 requires d < 0, got d = {d}"
    if H > 0.5:
        return (f"H = {H} > 1/2 requires d <= -sqrt(4H^2 - 1) = "
                f"{-math.sqrt(4 * H * H - 1)}, got d = {d}")
    return f"(H, d) = ({H}, {d}) is not admissible"


@dataclass(frozen=True)
class DomainInfo:
    rho1: float
    rho0: Optional[float] = None
    rho2: Optional[float] = None


def f_and_g(params: ProfileParams, rho: float) -> tuple[float, float]:
    """``(f(rho), g(rho))`` straight from their definitions."""
    if rho < 0:
        raise ProfileError(f"rho must be nonnegative, got {rho}")
    g = params.d + 2.0 * params.H * math.cosh(rho)
    s = math.sinh(rho)
    return (s - g) * (s + g), g


def f_expanded(params: ProfileParams, rho: float) -> float:
    H, d = params.H, params.d
    c = math.cosh(rho)
    return (1 - 4 * H * H) * c * c - 4 * d * H * c - 1 - d * d


def _cosh_roots(params: ProfileParams) -> tuple[float, Optional[float]]:
    """Roots ``(c1, c2)`` of f in ``c = cosh(rho)``; c1 bounds the admissible
    interval from below.  ``c2`` is None when f is linear in c."""
    H, d = params.H, params.d
    A = params.quad_coeff
    if A == 0.0:
        return (1 + d * d) / (-2 * d), None
    disc = max(1.0 - 4 * H * H + d * d, 0.0)
    sq = math.sqrt(disc)
    if A > 0:
        if d * H >= 0:
            c1 = (2 * d * H + sq) / A
            c2 = -(1 + d * d) / (A * c1)
        else:
            c2 = (2 * d * H - sq) / A
            c1 = -(1 + d * d) / (A * c2)
        return c1, c2
    # H > 1/2, d < 0: both roots positive
    c2 = (2 * d * H - sq) / A
    c1 = (1 + d * d) / ((4 * H * H - 1) * c2)
    if c1 > c2:
        c1 = c2
    return c1, c2


def _arcosh(c: float) -> float:
    return math.acosh(max(c, 1.0))


def _rho1(params: ProfileParams) -> float:
    """Lower root from ``cosh(rho1) - 1``, which f(1) = -(d + 2H)^2 gives
    without cancellation even when rho1 is tiny."""
    H, d = params.H, params.d
    A = params.quad_coeff
    c1, c2 = _cosh_roots(params)
    if A == 0.0:
        m = (1 + d) ** 2 / (-2 * d)
    elif A > 0:
        m = (d + 2 * H) ** 2 / (A * (1 - c2))
    else:
        if c2 - 1 <= 0:
            return _arcosh(c1)
        m = min((d + 2 * H) ** 2 / (-A * (c2 - 1)), c2 - 1)
    return 2.0 * math.asinh(math.sqrt(0.5 * m))


def thresholds(params: ProfileParams) -> DomainInfo:
    """Endpoints ``rho1 <= rho0 < rho2`` of the admissible interval."""
    H, d = params.H, params.d
    fam = params.family
    if fam in (FamilyClass.MinimalSlice, FamilyClass.MinimalCatenoid):
        return DomainInfo(rho1=math.asinh(d))
    if fam in (FamilyClass.EntireGraph, FamilyClass.Sphere):
        rho1 = 0.0
    else:
        rho1 = _rho1(params)
    rho0 = None
    if fam in (FamilyClass.ImmersedAnnulus, FamilyClass.Nodoid):
        rho0 = _arcosh(-d / (2 * H))
    rho2 = None
    if H > 0.5:
        if fam is FamilyClass.Cylinder:
            rho1 = rho2 = cylinder_radius(H)
        elif fam is FamilyClass.Sphere:
            rho2 = sphere_radius(H)
        else:
            rho2 = _arcosh(_cosh_roots(params)[1])
    return DomainInfo(rho1=rho1, rho0=rho0, rho2=rho2)


def sphere_radius(H: float) -> float:
    return math.acosh((4 * H * H + 1) / (4 * H * H - 1))


def cylinder_radius(H: float) -> float:
    return math.acosh(2 * H / math.sqrt(4 * H * H - 1))


def special_radii(H: float) -> tuple[float, float, float]:
    """``(sphere_rho2, cylinder_rho, unduloid_limit_rho)`` for ``H > 1/2``.

    The unduloids pinch onto the cylinder radius as ``d -> -sqrt(4H^2-1)``.
    """
    if not H > 0.5:
        raise ProfileError(f"special radii need H > 1/2, got {H}")
    rc = cylinder_radius(H)
    return sphere_radius(H), rc, rc


# ---------------------------------------------------------------------------
# integrands on the factored form of f


def _shc(x: float) -> float:
    """sinh(x)/x with the removable singularity filled in."""
    if abs(x) < 1e-4:
        return 1.0 + x * x / 6.0
    return math.sinh(x) / x


class _Integrand:
    """Pieces of ``lambda' = g / sqrt(K * s1 * s2)`` for fixed parameters.

    ``s1 = cosh r - cosh rho1`` vanishes at rho1; ``s2`` is
    ``cosh r - c2`` (H < 1/2), ``1`` (H = 1/2) or ``cosh rho2 - cosh r``
    (H > 1/2), which vanishes at rho2.
    """

    def __init__(self, params: ProfileParams, dom: DomainInfo):
        self.H = params.H
        self.d = params.d
        self.rho1 = dom.rho1
        self.rho2 = dom.rho2
        A = params.quad_coeff
        self.A = A
        self.regular_axis = params.family in (FamilyClass.EntireGraph, FamilyClass.Sphere)
        if A == 0.0:
            self.K = -2.0 * params.d
            self.c2 = None
        else:
            self.K = abs(A)
            if self.regular_axis:
                # cosh rho1 = 1 exactly; the other root from Vieta.
                self.c2 = -(1 + params.d ** 2) / A
            else:
                self.c2 = _cosh_roots(params)[1]

    def g(self, r: float) -> float:
        if self.regular_axis:
            s = math.sinh(0.5 * r)
            return 4.0 * self.H * s * s
        return self.d + 2.0 * self.H * math.cosh(r)

    def s1(self, r: float) -> float:
        return 2.0 * math.sinh(0.5 * (r + self.rho1)) * math.sinh(0.5 * (r - self.rho1))

    def s2(self, r: float) -> float:
        if self.A == 0.0:
            return 1.0
        if self.A > 0:
            return math.cosh(r) - self.c2
        return 2.0 * math.sinh(0.5 * (self.rho2 + r)) * math.sinh(0.5 * (self.rho2 - r))

    def numerator_over_sqrt_s1(self, r: float) -> float:
        """``g / sqrt(s1)`` away from rho1 (regular at the axis when g ~ s1)."""
        if self.regular_axis:
            return 2.0 * self.H * math.sqrt(2.0) * math.sinh(0.5 * r)
        return self.g(r) / math.sqrt(self.s1(r))

    def slope(self, r: float) -> float:
        """``lambda'(r)``, with +-inf at simple zeros of f."""
        if self.regular_axis:
            if r == 0.0:
                return 0.0
            s2 = self.s2(r)
            if s2 <= 0.0:
                return math.inf
            return self.numerator_over_sqrt_s1(r) / math.sqrt(self.K * s2)
        s1 = self.s1(r)
        s2 = self.s2(r)
        g = self.g(r)
        if s1 <= 0.0 or s2 <= 0.0:
            return math.copysign(math.inf, g) if g != 0 else 0.0
        return g / math.sqrt(self.K * s1 * s2)

    def left_tau(self, tau: float) -> float:
        """Integrand in ``tau`` with ``r = rho1 + tau^2``."""
        x = 0.5 * tau * tau
        r = self.rho1 + tau * tau
        if self.regular_axis:
            return self.slope(r) * 2.0 * tau
        w = 2.0 / math.sqrt(math.sinh(self.rho1 + x) * _shc(x))
        return self.g(r) * w / math.sqrt(self.K * self.s2(r))

    def right_tau(self, tau: float) -> float:
        """Integrand in ``tau`` with ``r = rho2 - tau^2``."""
        x = 0.5 * tau * tau
        r = self.rho2 - tau * tau
        w = 2.0 / math.sqrt(self.K * math.sinh(self.rho2 - x) * _shc(x))
        return self.numerator_over_sqrt_s1(r) * w


def _quad(func: Callable[[float], float], a: float, b: float, tol: float,
          what: str = "profile integral", points=None) -> float:
    if a == b:
        return 0.0
    val, err, info = integrate.quad(func, a, b, epsabs=tol, epsrel=1e-13,
                                    limit=400, full_output=1, points=points)[:3]
    if err > tol and err > 1e-13 * abs(val):
        raise QuadratureError(f"{what} on [{a}, {b}] did not converge", err)
    return val


def _check_rho(dom: DomainInfo, rho: float):
    lo = dom.rho1
    hi = dom.rho2 if dom.rho2 is not None else math.inf
    slack = 1e-14 * max(1.0, abs(lo))
    if not (lo - slack <= rho <= hi + 1e-14 * max(1.0, hi if math.isfinite(hi) else 1.0)):
        raise ProfileError(f"rho = {rho} outside the admissible interval [{lo}, {hi}]")


def _increment(ig: _Integrand, a: float, b: float, tol: float) -> float:
    """``int_a^b lambda'`` for ``rho1 <= a <= b`` inside the domain."""
    if b <= a:
        return 0.0
    rho1, rho2 = ig.rho1, ig.rho2
    if rho2 is None:
        if ig.regular_axis:
            return _quad(ig.slope, a, b, tol)
        return _quad(ig.left_tau, math.sqrt(a - rho1), math.sqrt(b - rho1), tol)
    mid = 0.5 * (rho1 + rho2)
    total = 0.0
    if a < mid:
        e = min(b, mid)
        if ig.regular_axis:
            total += _quad(ig.slope, a, e, tol / 2)
        else:
            total += _quad(ig.left_tau, math.sqrt(a - rho1), math.sqrt(e - rho1), tol / 2)
    if b > mid:
        s = max(a, mid)
        total += _quad(ig.right_tau, math.sqrt(max(rho2 - b, 0.0)),
                       math.sqrt(rho2 - s), tol / 2)
    return total


def lambda_eval(params: ProfileParams, rho: float, tol: float = DEFAULT_TOL) -> float:
    """Height ``lambda(rho) = int_{rho1}^{rho} g / sqrt(f)`` of the profile."""
    if params.family is FamilyClass.Cylinder:
        raise ProfileError("the cylinder profile is vertical, not a graph over rho")
    if params.family is FamilyClass.MinimalSlice:
        return 0.0
    dom = thresholds(params)
    _check_rho(dom, rho)
    rho = max(rho, dom.rho1)
    if dom.rho2 is not None:
        rho = min(rho, dom.rho2)
    return _increment(_Integrand(params, dom), dom.rho1, rho, tol)


def lambda_increment(params: ProfileParams, a: float, b: float,
                     tol: float = DEFAULT_TOL) -> float:
    """``lambda(b) - lambda(a)`` by one direct quadrature over ``[a, b]``.

    Accurate to `tol` in absolute terms even when ``b - a`` is tiny, which
    differencing two calls of :func:`lambda_eval` is not.
    """
    if params.family is FamilyClass.Cylinder:
        raise ProfileError("the cylinder profile is vertical, not a graph over rho")
    if params.family is FamilyClass.MinimalSlice:
        return 0.0
    dom = thresholds(params)
    _check_rho(dom, a)
    _check_rho(dom, b)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    a = max(a, dom.rho1)
    if dom.rho2 is not None:
        b = min(b, dom.rho2)
    return sign * _increment(_Integrand(params, dom), a, b, tol)


def lambda_prime(params: ProfileParams, rho: float) -> float:
    """``lambda'(rho) = g/sqrt(f)``; returns +-inf at simple zeros of f."""
    if params.family is FamilyClass.MinimalSlice:
        return 0.0
    if params.family is FamilyClass.Cylinder:
        raise ProfileError("the cylinder profile is vertical, not a graph over rho")
    dom = thresholds(params)
    _check_rho(dom, rho)
    return _Integrand(params, dom).slope(min(max(rho, dom.rho1),
                                             dom.rho2 if dom.rho2 is not None else rho))


# ---------------------------------------------------------------------------
# minimal surfaces


def minimal_lambda(d: float, rho: float, tol: float = DEFAULT_TOL) -> float:
    """Profile of the minimal catenoid ``M_d``; ``rho = inf`` gives the limit
    height of its upper half."""
    d = abs(d)
    if d == 0.0:
        return 0.0
    rho1 = math.asinh(d)
    if rho < rho1 - 1e-14 * max(1.0, rho1):
        raise ProfileError(f"rho = {rho} is inside the neck radius arcsinh(d) = {rho1}")
    params = ProfileParams(0.0, d)
    dom = DomainInfo(rho1=rho1)
    ig = _Integrand(params, dom)
    if math.isfinite(rho):
        return _increment(ig, rho1, max(rho, rho1), tol)
    # integrand <= d / (sinh r sqrt(1 - d^2/sinh^2 T)) for r >= T
    knee = rho1 + 1.0
    head = _increment(ig, rho1, knee, tol / 3)
    T = max(knee, math.asinh(2 * d))
    while True:
        sT = math.sinh(T)
        bound = d / math.sqrt(1 - (d / sT) ** 2) * 2 * math.exp(-T) / (1 - math.exp(-2 * T))
        if bound < tol / 3:
            break
        T += 1.0
    body = _quad(lambda r: d / math.sqrt((math.sinh(r) - d) * (math.sinh(r) + d)),
                 knee, T, tol / 3, "catenoid tail")
    return head + body


def minimal_arclength(d: float, s: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """``(rho(s), lambda(s))`` along the catenoid profile by arclength from the neck."""
    if s < 0:
        raise ProfileError(f"arclength must be nonnegative, got {s}")
    d = abs(d)
    a = 1.0 + d * d
    rho = math.acosh(math.sqrt(a) * math.cosh(s))
    lam = _quad(lambda t: d / math.sqrt(d * d + a * math.sinh(t) ** 2), 0.0, s, tol,
                "arclength integral")
    return rho, lam


def _height_cutoff(d: float, tol: float, power: int = 1) -> float:
    T = 1.0
    a = 1.0 + d * d
    while True:
        if power == 1:
            tail = 4 * d * math.exp(-T) / (math.sqrt(a) * (1 - math.exp(-2 * T)))
        else:
            # sinh^2 / (a sinh^2)^{3/2} = 1 / (a^{3/2} sinh t)
            tail = 4 * math.exp(-T) / (a ** 1.5 * (1 - math.exp(-2 * T)))
        if tail < tol / 2:
            return T
        T += 0.5


def catenoid_height(d: float, tol: float = DEFAULT_TOL) -> float:
    """Vertical distance between the two asymptotic circles of ``M_d``."""
    if not d > 0:
        raise ProfileError(f"catenoid height needs d > 0, got {d}")
    T = _height_cutoff(d, tol)
    a = 1.0 + d * d
    pts = [p for p in (d, 10 * d) if p < T]
    half = _quad(lambda t: d / math.sqrt(d * d + a * math.sinh(t) ** 2), 0.0, T,
                 tol / 4, "catenoid height", points=pts or None)
    return 2.0 * half


def catenoid_height_derivative(d: float, tol: float = DEFAULT_TOL) -> float:
    """``h'(d) = 2 int_0^inf sinh(t)^2 / ((1+d^2) cosh(t)^2 - 1)^{3/2} dt``."""
    if not d > 0:
        raise ProfileError(f"catenoid height derivative needs d > 0, got {d}")
    T = _height_cutoff(d, tol, power=2)
    a = 1.0 + d * d

    def integrand(t):
        s = math.sinh(t)
        return s * s / (d * d + a * s * s) ** 1.5

    pts = [p for p in (d, 10 * d) if p < T]
    return 2.0 * _quad(integrand, 0.0, T, tol / 4, "catenoid height derivative",
                       points=pts or None)


# ---------------------------------------------------------------------------
# sampled profiles


@dataclass(frozen=True)
class ProfileCurve:
    params: ProfileParams
    domain: DomainInfo
    rho: np.ndarray
    lam: np.ndarray
    lam_prime: np.ndarray
    extension: Extension
    period: Optional[float] = None

    def __len__(self):
        return len(self.rho)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.rho.tolist(), self.lam.tolist(), self.lam_prime.tolist()))

    def extended(self) -> tuple[np.ndarray, np.ndarray]:
        """The generating curve after the symmetric extension.

        Reflected families are mirrored across the neck level
        ``t = lambda(rho1) = 0``; periodic ones return one full period
        (the fundamental arc followed by its mirror image across the top).
        """
        rho, lam = self.rho, self.lam
        if self.extension is Extension.NONE:
            return rho.copy(), lam.copy()
        if self.extension is Extension.REFLECT_ACROSS_SLICE:
            if self.params.family is FamilyClass.Sphere:
                top = lam[-1]
                return (np.concatenate([rho, rho[-2::-1]]),
                        np.concatenate([lam, 2 * top - lam[-2::-1]]))
            return (np.concatenate([rho[:0:-1], rho]),
                    np.concatenate([-lam[:0:-1], lam]))
        top = lam[-1]
        return (np.concatenate([rho, rho[-2::-1]]),
                np.concatenate([lam, 2 * top - lam[-2::-1]]))


def _extension_for(params: ProfileParams) -> Extension:
    fam = params.family
    if fam in (FamilyClass.MinimalSlice, FamilyClass.EntireGraph):
        return Extension.NONE
    if fam in (FamilyClass.Unduloid, FamilyClass.Nodoid):
        return Extension.PERIODIC_VERTICAL
    return Extension.REFLECT_ACROSS_SLICE


def sample_radii(dom: DomainInfo, n: int, rho_max: float) -> np.ndarray:
    """Cosine-spaced radii clustered at the endpoints where the slope blows up."""
    s = np.linspace(0.0, 1.0, n)
    if dom.rho2 is not None:
        a, b = dom.rho1, dom.rho2
        rho = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(np.pi * s)
    else:
        a = dom.rho1
        b = max(rho_max, a)
        rho = a + (b - a) * (1.0 - np.cos(0.5 * np.pi * s))
        rho[-1] = b
    rho[0] = dom.rho1
    if dom.rho2 is not None:
        rho[-1] = dom.rho2
    return rho


def generate_profile(params: ProfileParams, n_samples: int = 200,
                     tol: float = DEFAULT_TOL, rho_max: float = DEFAULT_RHO_MAX) -> ProfileCurve:
    """Sample the fundamental arc of the profile on ``[rho1, min(rho2, rho_max)]``.

    Heights are accumulated panel by panel between consecutive samples, so
    the whole curve costs one adaptive quadrature per sample.
    """
    if n_samples < 2:
        raise ProfileError("need at least two samples")
    if params.family is FamilyClass.Cylinder:
        raise ProfileError("the cylinder profile is vertical, not a graph over rho")
    dom = thresholds(params)
    if dom.rho2 is None and rho_max <= dom.rho1:
        raise ProfileError(f"rho_max = {rho_max} does not exceed rho1 = {dom.rho1}")
    rho = sample_radii(dom, n_samples, rho_max)
    if params.family is FamilyClass.MinimalSlice:
        lam = np.zeros_like(rho)
        slope = np.zeros_like(rho)
    else:
        ig = _Integrand(params, dom)
        panel_tol = max(tol / n_samples, 1e-15)
        steps = [_increment(ig, rho[i], rho[i + 1], panel_tol) for i in range(n_samples - 1)]
        lam = np.concatenate([[0.0], np.cumsum(steps)])
        slope = np.array([ig.slope(r) for r in rho])
    ext = _extension_for(params)
    period = None
    if ext is Extension.PERIODIC_VERTICAL:
        period = 2.0 * (lam[-1] - lam[0])
    return ProfileCurve(params=params, domain=dom, rho=rho, lam=lam, lam_prime=slope,
                        extension=ext, period=period)


def first_integral_residual(H: float, d: float, rho, slope) -> np.ndarray:
    """``|sinh(rho) lambda'/sqrt(1+lambda'^2) - 2H cosh(rho) - d|`` elementwise.

    Infinite slopes contribute the limit ``sign(lambda')``.
    """
    rho = np.asarray(rho, dtype=float)
    slope = np.asarray(slope, dtype=float)
    with np.errstate(invalid="ignore"):
        unit = np.where(np.isinf(slope), np.sign(slope), slope / np.hypot(1.0, slope))
    return np.abs(np.sinh(rho) * unit - 2.0 * H * np.cosh(rho) - d)
