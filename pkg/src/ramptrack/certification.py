"""Stability certification and optimal design for the tracking recursion.

On a quadratic cost with curvature lam, the error dynamics of the recursion
are governed by the monic quadratic

    chi(z) = z^2 + a1 z + a2,   a1 = -2 + lam * alpha,   a2 = 1 - lam * gamma.

Root locations inside a disk of radius rho are characterized by an open
triangle in the (a1, a2) plane with vertices P = (-2 rho, rho^2),
Q = (2 rho, rho^2) and R = (0, -rho^2).  As lam sweeps the sector [m, L] the
coefficient point traces a segment; containment of that segment in the
triangle is the quadratic-rate test, and the frequency-domain counterpart is
the discrete circle criterion: the loop polynomial at lam = m must be Schur
and the sector transfer ratio

    H0(z) = (z^2 + (L alpha - 2) z + 1 - L gamma)
          / (z^2 + (m alpha - 2) z + 1 - m gamma)

must have strictly positive real part on the unit circle.  The optimal design
for condition ratio kappa = L/m is

    rho*(kappa) = sqrt((kappa - 1)/(kappa + 1)),
    alpha* = 2/L,   gamma* = 2/(m + L),

and no parameter pair that passes the circle-criterion certificate beats the
contraction factor rho*.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .oracles import SectorBounds
from .tracker import TrackerParams

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"

# Absolute slack for interior/boundary classification.
CLASSIFY_TOL = 1e-12
# Schur strictness: root moduli must stay below 1 - SCHUR_SLACK.
SCHUR_SLACK = 1e-9
# Below this modulus the H0 denominator counts as a pole on the circle.
POLE_TOL = 1e-14


class UnitCirclePoleError(ArithmeticError):
    """The H0 denominator vanishes on the evaluation circle."""


@dataclass(frozen=True)
class CharPolyCoeffs:
    """Coefficients of z^2 + a1 z + a2 at one sector gain lam."""

    a1: float
    a2: float
    lam: float = float("nan")


@dataclass(frozen=True)
class TriangleRegion:
    """Root-location triangle for the disk of radius rho, 0 < rho < 1."""

    rho: float

    def __post_init__(self):
        if not (np.isfinite(self.rho) and 0.0 < self.rho < 1.0):
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")

    @property
    def vertices(self):
        r = self.rho
        return ((-2.0 * r, r * r), (2.0 * r, r * r), (0.0, -r * r))


@dataclass(frozen=True)
class SegmentJ:
    """Coefficient segment endpoints at lam = m and lam = L."""

    e1: CharPolyCoeffs
    e2: CharPolyCoeffs
    params: TrackerParams
    bounds: SectorBounds


@dataclass(frozen=True)
class Certificate:
    schur_ok: bool
    spr_ok: bool
    spr_margin: float
    r_rate: float
    globally_convergent: bool

    def to_dict(self) -> dict:
        return {
            "schur_ok": self.schur_ok,
            "spr_ok": self.spr_ok,
            "spr_margin": self.spr_margin,
            "r_rate": self.r_rate,
            "globally_convergent": self.globally_convergent,
        }


@dataclass(frozen=True)
class DesignResult:
    alpha_star: float
    gamma_star: float
    rho_star: float

    def params(self) -> TrackerParams:
        return TrackerParams(alpha=self.alpha_star, gamma=self.gamma_star)

    def to_dict(self) -> dict:
        return {
            "alpha_star": self.alpha_star,
            "gamma_star": self.gamma_star,
            "rho_star": self.rho_star,
        }


def char_poly(params: TrackerParams, lam: float) -> CharPolyCoeffs:
    """Closed-loop characteristic coefficients at sector gain lam > 0."""
    if not (np.isfinite(lam) and lam > 0):
        raise ValueError(f"lam must be positive and finite, got {lam}")
    return CharPolyCoeffs(
        a1=-2.0 + lam * params.alpha,
        a2=1.0 - lam * params.gamma,
        lam=lam,
    )


def _radius_arrays(a1, a2):
    # Max root modulus of z^2 + a1 z + a2 in closed form.  Real roots:
    # (|a1| + sqrt(disc))/2 picks the larger modulus without cancellation.
    # Complex pair: modulus is sqrt(a2) since a2 is the root product.
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    disc = a1 * a1 - 4.0 * a2
    real = (np.abs(a1) + np.sqrt(np.maximum(disc, 0.0))) / 2.0
    cplx = np.sqrt(np.maximum(a2, 0.0))
    return np.where(disc >= 0.0, real, cplx)


def spectral_radius(coeffs: CharPolyCoeffs) -> float:
    """Largest root modulus of z^2 + a1 z + a2."""
    return float(_radius_arrays(coeffs.a1, coeffs.a2))


def r_rate_argmax(params: TrackerParams, bounds: SectorBounds, grid: int = 2001):
    """Worst-case root radius over lam in [m, L] and the achieving lam.

    Dense grid scan (endpoints included) followed by a ternary refinement of
    the bracketing cells, so interior maxima are located to high accuracy
    while endpoint maxima are evaluated exactly.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    m, L = bounds.m, bounds.L
    if m == L:
        c = char_poly(params, m)
        return spectral_radius(c), m

    lams = np.linspace(m, L, grid)
    radii = _radius_arrays(lams * params.alpha - 2.0, 1.0 - lams * params.gamma)
    i = int(np.argmax(radii))
    best_val = float(radii[i])
    best_lam = float(lams[i])

    def f(lam):
        return float(_radius_arrays(lam * params.alpha - 2.0, 1.0 - lam * params.gamma))

    lo = float(lams[max(i - 1, 0)])
    hi = float(lams[min(i + 1, grid - 1)])
    for _ in range(90):
        third = (hi - lo) / 3.0
        m1, m2 = lo + third, hi - third
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
    mid = 0.5 * (lo + hi)
    if f(mid) > best_val:
        best_val, best_lam = f(mid), mid
    return best_val, best_lam


def r_rate(params: TrackerParams, bounds: SectorBounds, grid: int = 2001) -> float:
    """Worst-case contraction factor of the error dynamics over the sector."""
    return r_rate_argmax(params, bounds, grid)[0]


def jury_membership(
    coeffs: CharPolyCoeffs, region: TriangleRegion, tol: float = CLASSIFY_TOL
) -> str:
    """Classify a coefficient point against the root-location triangle.

    Interior membership is equivalent to both roots lying strictly inside the
    disk of radius rho.  The three half-plane margins correspond to the edges
    through (P, R), (Q, R) and (P, Q); a point within tol of any edge while
    violating none is classified as boundary.
    """
    rho = region.rho
    a1, a2 = coeffs.a1, coeffs.a2
    margins = (
        rho * rho - a2,  # top edge through P, Q
        rho * a1 + rho * rho + a2,  # left edge through P, R
        -rho * a1 + rho * rho + a2,  # right edge through Q, R
    )
    worst = min(margins)
    if worst < -tol:
        return OUTSIDE
    if worst <= tol:
        return BOUNDARY
    return INSIDE


def coefficient_segment(params: TrackerParams, bounds: SectorBounds) -> SegmentJ:
    """Endpoints of the coefficient segment swept by lam in [m, L]."""
    return SegmentJ(
        e1=char_poly(params, bounds.m),
        e2=char_poly(params, bounds.L),
        params=params,
        bounds=bounds,
    )


def segment_in_triangle(
    params: TrackerParams, bounds: SectorBounds, region: TriangleRegion
) -> bool:
    """Closed containment of the coefficient segment in the triangle.

    The triangle is convex and the segment is the convex hull of its two
    endpoints, so endpoint membership decides the whole segment.
    """
    seg = coefficient_segment(params, bounds)
    return (
        jury_membership(seg.e1, region) != OUTSIDE
        and jury_membership(seg.e2, region) != OUTSIDE
    )


def kappa_bar(params: TrackerParams, m: float, region: TriangleRegion) -> float:
    """Largest condition ratio whose coefficient segment stays in the triangle.

    The segment endpoint at lam = m + s moves along the ray E1 + s (alpha,
    -gamma), so each edge yields a linear constraint in s; the first edge
    crossed in the decreasing direction caps s.  Returns 0 when E1 itself
    falls outside, +inf when no edge ever binds.
    """
    e1 = char_poly(params, m)
    if jury_membership(e1, region) == OUTSIDE:
        return 0.0
    rho = region.rho
    alpha, gamma = params.alpha, params.gamma
    margins = (
        rho * rho - e1.a2,
        rho * e1.a1 + rho * rho + e1.a2,
        -rho * e1.a1 + rho * rho + e1.a2,
    )
    slopes = (gamma, rho * alpha - gamma, -rho * alpha - gamma)
    s_max = math.inf
    for g, dg in zip(margins, slopes):
        if dg < 0.0:
            s_max = min(s_max, max(g, 0.0) / -dg)
    if not math.isfinite(s_max):
        return math.inf
    return (m + s_max) / m


def kappa_max(rho: float) -> float:
    """Largest certifiable condition ratio at contraction factor rho."""
    if not (np.isfinite(rho) and 0.0 < rho < 1.0):
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    return (1.0 + rho * rho) / (1.0 - rho * rho)


def rho_star(kappa: float) -> float:
    """Optimal contraction factor for condition ratio kappa > 1."""
    if not (np.isfinite(kappa) and kappa > 1.0):
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    return math.sqrt((kappa - 1.0) / (kappa + 1.0))


def design_optimal(bounds: SectorBounds) -> DesignResult:
    """Rate-optimal parameters for the declared sector.

    alpha* = 2/L and gamma* = 2/(m + L) are the closed forms of the
    rho-parameterized step and weight evaluated at rho*(kappa); they place the
    coefficient segment endpoints on the triangle boundary of radius rho*, at
    the top edge and at the bottom vertex.
    """
    kappa = bounds.kappa
    if not kappa > 1.0:
        raise ValueError("optimal design needs L > m (kappa > 1)")
    return DesignResult(
        alpha_star=2.0 / bounds.L,
        gamma_star=2.0 / (bounds.m + bounds.L),
        rho_star=rho_star(kappa),
    )


def g0_eval(params: TrackerParams, z: complex) -> complex:
    """Open-loop transfer (alpha z - gamma)/(z - 1)^2; z = 1 is the pole."""
    z = complex(z)
    if z == 1.0:
        raise ValueError("z = 1 is a double pole of the open-loop transfer")
    return (params.alpha * z - params.gamma) / (z - 1.0) ** 2


def _h0_on_circle(params: TrackerParams, bounds: SectorBounds, omegas) -> np.ndarray:
    z = np.exp(1j * np.asarray(omegas, dtype=float))
    alpha, gamma = params.alpha, params.gamma
    m, L = bounds.m, bounds.L
    num = (z + (L * alpha - 2.0)) * z + (1.0 - L * gamma)
    den = (z + (m * alpha - 2.0)) * z + (1.0 - m * gamma)
    small = np.abs(den).min()
    if small < POLE_TOL:
        raise UnitCirclePoleError(
            f"H0 denominator modulus {small:.3e} on the unit circle"
        )
    return num / den


def h0_eval(params: TrackerParams, bounds: SectorBounds, omega: float) -> complex:
    """Sector transfer ratio H0(e^{i omega}) = (1 + L G0)/(1 + m G0)."""
    return complex(_h0_on_circle(params, bounds, [float(omega)])[0])


def schur_check(params: TrackerParams, m: float) -> bool:
    """Loop polynomial z^2 + (m alpha - 2) z + 1 - m gamma strictly Schur.

    Strictness is enforced by testing against the disk of radius
    1 - SCHUR_SLACK, so root moduli within rounding of the unit circle fail.
    """
    c = char_poly(params, m)
    region = TriangleRegion(rho=1.0 - SCHUR_SLACK)
    return jury_membership(c, region) != OUTSIDE


def spr_check(params: TrackerParams, bounds: SectorBounds, grid: int = 1024):
    """Strict positive realness of H0 on a frequency grid.

    Returns (ok, margin) where margin is the minimum of Re H0(e^{i omega})
    over omega in [0, pi] sampled at grid+1 evenly spaced points.  ok requires
    the denominator to be Schur and the margin to be positive.  A pole on the
    circle yields (False, -inf).
    """
    if grid < 64:
        raise ValueError("grid must be >= 64")
    den_ok = schur_check(params, bounds.m)
    omegas = np.linspace(0.0, np.pi, grid + 1)
    try:
        margin = float(_h0_on_circle(params, bounds, omegas).real.min())
    except UnitCirclePoleError:
        return False, float("-inf")
    return bool(den_ok and margin > 0.0), margin


def certify(
    params: TrackerParams,
    bounds: SectorBounds,
    rate_grid: int = 2001,
    spr_grid: int = 1024,
) -> Certificate:
    """Run both circle-criterion conditions and report the worst-case rate."""
    schur_ok = schur_check(params, bounds.m)
    spr_ok, margin = spr_check(params, bounds, spr_grid)
    rate = r_rate(params, bounds, rate_grid)
    convergent = bool(schur_ok and spr_ok)
    if convergent and not rate < 1.0:
        warnings.warn(
            f"certificate inconsistency: globally convergent but r_rate={rate}",
            RuntimeWarning,
            stacklevel=2,
        )
    return Certificate(
        schur_ok=schur_ok,
        spr_ok=spr_ok,
        spr_margin=margin,
        r_rate=rate,
        globally_convergent=convergent,
    )
