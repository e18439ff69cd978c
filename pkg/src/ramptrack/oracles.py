"""Time-varying cost oracles with sector-bounded gradients.

The problem class is a cost f(x, t) whose unique minimizer drifts linearly,
x*(t) = x*(0) + velocity * t, and whose gradient g = grad_x f(x, t) satisfies
the sector inequality around the tracking error e = x - x*(t):

    (m e - g)' (L e - g) <= 0,   0 < m <= L.

Twice differentiable costs with m I <= hessian <= L I belong to the class.
Oracles are plain immutable records around user-supplied callables, so the
sector property is declared, not enforced; `verify_sector_membership` samples
it empirically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc


def _vector(x, name: str = "x") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"{name} must be a 1-D real vector, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class OptimumTrajectory:
    """Linearly drifting minimizer x*(t) = x*(0) + velocity * t."""

    x_star0: np.ndarray
    velocity: np.ndarray

    def __post_init__(self):
        x0 = _vector(self.x_star0, "x_star0")
        v = _vector(self.velocity, "velocity")
        if x0.shape != v.shape:
            raise ValueError("x_star0 and velocity must have the same dimension")
        object.__setattr__(self, "x_star0", x0)
        object.__setattr__(self, "velocity", v)

    @property
    def dimension(self) -> int:
        return self.x_star0.size

    def optimum_at(self, t) -> np.ndarray:
        # Affine in t by construction; no cumulative drift for large t.
        return self.x_star0 + self.velocity * float(t)

    @staticmethod
    def static(x_star0) -> "OptimumTrajectory":
        x0 = _vector(x_star0, "x_star0")
        return OptimumTrajectory(x0, np.zeros_like(x0))


@dataclass(frozen=True)
class SectorBounds:
    """Declared sector constants 0 < m <= L."""

    m: float
    L: float

    def __post_init__(self):
        if not (np.isfinite(self.m) and np.isfinite(self.L)):
            raise ValueError("sector bounds must be finite")
        if not (0.0 < self.m <= self.L):
            raise ValueError(f"need 0 < m <= L, got m={self.m}, L={self.L}")

    @property
    def kappa(self) -> float:
        # Always derived, never stored, so it cannot go stale.
        return self.L / self.m


@dataclass(frozen=True)
class CostOracle:
    """Black-box time-varying cost with declared sector bounds.

    gradient(x, t) -> vector is required; hessian(x, t) -> matrix is optional
    and used only by diagnostics.  The declared bounds travel with the oracle
    and are what every certification routine consumes; nothing is inferred
    from samples.
    """

    dimension: int
    bounds: SectorBounds
    trajectory: OptimumTrajectory
    gradient: Callable[[np.ndarray, int], np.ndarray]
    hessian: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    label: str = ""

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.trajectory.dimension != self.dimension:
            raise ValueError("trajectory dimension does not match oracle dimension")

    def grad(self, x, t) -> np.ndarray:
        x = _vector(x)
        if x.size != self.dimension:
            raise ValueError(
                f"point has dimension {x.size}, oracle expects {self.dimension}"
            )
        return np.asarray(self.gradient(x, t), dtype=float)

    def optimum_at(self, t) -> np.ndarray:
        return self.trajectory.optimum_at(t)


@dataclass(frozen=True)
class MembershipReport:
    """Result of an empirical sector check."""

    worst_residual: float
    worst_x: np.ndarray
    worst_t: int
    passed: bool
    samples: int
    tolerance: float


def sector_residual(oracle: CostOracle, x, t) -> float:
    """Sector inequality residual (m e - g)'(L e - g) at one point.

    Nonpositive values are consistent with membership in the declared sector;
    a positive value is a counterexample.
    """
    x = _vector(x)
    if x.size != oracle.dimension:
        raise ValueError(
            f"point has dimension {x.size}, oracle expects {oracle.dimension}"
        )
    e = x - oracle.optimum_at(t)
    g = oracle.grad(x, t)
    m, L = oracle.bounds.m, oracle.bounds.L
    return float(np.dot(m * e - g, L * e - g))


def low_discrepancy_samples(box, t_range, count: int):
    """Deterministic Halton samples (x, t) over an axis-aligned box.

    box is a (lo, hi) pair of vectors; t_range an inclusive integer interval.
    The unscrambled Halton sequence makes reports reproducible without a seed.
    """
    lo = _vector(box[0], "box lo")
    hi = _vector(box[1], "box hi")
    if lo.shape != hi.shape or np.any(lo > hi):
        raise ValueError("box must be (lo, hi) with lo <= hi componentwise")
    t0, t1 = int(t_range[0]), int(t_range[1])
    if t1 < t0:
        raise ValueError("t_range must be (t0, t1) with t0 <= t1")
    if count < 1:
        raise ValueError("need at least one sample")
    eng = qmc.Halton(d=lo.size + 1, scramble=False)
    u = eng.random(count)
    xs = lo + u[:, : lo.size] * (hi - lo)
    ts = t0 + np.floor(u[:, lo.size] * (t1 - t0 + 1)).astype(int)
    return xs, np.clip(ts, t0, t1)


def verify_sector_membership(
    oracle: CostOracle,
    box,
    t_range,
    samples: int = 10_000,
    tolerance: float = 1e-12,
) -> MembershipReport:
    """Sample the sector residual over a box and time window.

    Returns the worst (largest) residual and where it occurred.  The check
    passes when the worst residual stays below the small positive tolerance
    that absorbs rounding noise.  Sampling can only refute membership, never
    prove it.
    """
    xs, ts = low_discrepancy_samples(box, t_range, samples)
    worst = -np.inf
    worst_x = xs[0]
    worst_t = int(ts[0])
    for x, t in zip(xs, ts):
        r = sector_residual(oracle, x, int(t))
        if r > worst:
            worst, worst_x, worst_t = r, x, int(t)
    return MembershipReport(
        worst_residual=float(worst),
        worst_x=np.array(worst_x),
        worst_t=worst_t,
        passed=bool(worst <= tolerance),
        samples=samples,
        tolerance=tolerance,
    )


def make_quadratic(
    eigenvalues,
    trajectory: OptimumTrajectory,
    rotation: Optional[np.ndarray] = None,
    declared_bounds: Optional[SectorBounds] = None,
    label: str = "quadratic",
) -> CostOracle:
    """Quadratic member of the sector class with Hessian R' diag(eigs) R.

    Eigenvalues must be positive and, when declared_bounds is given, must lie
    inside [m, L]; otherwise the bounds default to (min eig, max eig), the
    tightest valid declaration.
    """
    eigs = _vector(eigenvalues, "eigenvalues")
    if np.any(eigs <= 0):
        raise ValueError("eigenvalues must be positive")
    n = eigs.size
    if trajectory.dimension != n:
        raise ValueError("trajectory dimension must match the number of eigenvalues")
    if declared_bounds is None:
        declared_bounds = SectorBounds(float(eigs.min()), float(eigs.max()))
    else:
        if eigs.min() < declared_bounds.m or eigs.max() > declared_bounds.L:
            raise ValueError(
                "eigenvalues fall outside the declared sector "
                f"[{declared_bounds.m}, {declared_bounds.L}]"
            )
    if rotation is None:
        hess = np.diag(eigs)
    else:
        rot = np.asarray(rotation, dtype=float)
        if rot.shape != (n, n):
            raise ValueError(f"rotation must be {n}x{n}")
        if not np.allclose(rot.T @ rot, np.eye(n), atol=1e-9):
            raise ValueError("rotation must be orthogonal")
        hess = rot.T @ np.diag(eigs) @ rot
    hess = 0.5 * (hess + hess.T)  # symmetrize away rounding skew

    def gradient(x, t, _H=hess, _traj=trajectory):
        return _H @ (np.asarray(x, dtype=float) - _traj.optimum_at(t))

    def hessian(x, t, _H=hess):
        return _H

    return CostOracle(
        dimension=n,
        bounds=declared_bounds,
        trajectory=trajectory,
        gradient=gradient,
        hessian=hessian,
        label=label,
    )
