"""Reference first-order methods for the moving-optimum comparisons.

All baselines evaluate the gradient at the current time index only, so each
carries a single integrator against the drifting optimum and settles at a
nonzero offset on ramps: gradient descent at -a/(step*lam) per mode, the
heavy-ball method at -a(1-beta)/(alpha*lam).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oracles import CostOracle, SectorBounds, _vector
from .tracker import RecursionState, SimulationFault, Trajectory, _checked_gradient

METHODS = ("gd", "heavy_ball", "tmm")


@dataclass(frozen=True)
class BaselineParams:
    """Method name plus its named coefficient map (JSON-friendly)."""

    method: str
    coefficients: dict

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown baseline method {self.method!r}")
        for k, v in self.coefficients.items():
            if not np.isfinite(v):
                raise ValueError(f"coefficient {k} must be finite, got {v}")


@dataclass(frozen=True)
class PointState:
    x: np.ndarray
    t: int


@dataclass(frozen=True)
class TmmState:
    xi_prev: np.ndarray
    xi_curr: np.ndarray
    t: int


def gd_defaults(bounds: SectorBounds) -> dict:
    return {"step": 2.0 / (bounds.L + bounds.m)}


def heavy_ball_defaults(bounds: SectorBounds) -> dict:
    """Classical two-step momentum tuning from the sector constants."""
    sm, sl = math.sqrt(bounds.m), math.sqrt(bounds.L)
    return {
        "step": 4.0 / (sl + sm) ** 2,
        "momentum": ((sl - sm) / (sl + sm)) ** 2,
    }


def tmm_defaults(bounds: SectorBounds) -> dict:
    """Standard three-sequence momentum coefficients for ratio kappa = L/m.

    With rho = 1 - 1/sqrt(kappa): step (1+rho)/L, momentum rho^2/(2-rho),
    query weight rho^2/((1+rho)(2-rho)), output weight rho^2/(1-rho^2).
    At kappa = 1 all momentum terms vanish and the method is gradient descent
    with step 1/L.
    """
    kappa = bounds.kappa
    rho = 1.0 - 1.0 / math.sqrt(kappa)
    if rho == 0.0:
        return {"step": 1.0 / bounds.L, "momentum": 0.0, "query_weight": 0.0, "output_weight": 0.0}
    return {
        "step": (1.0 + rho) / bounds.L,
        "momentum": rho**2 / (2.0 - rho),
        "query_weight": rho**2 / ((1.0 + rho) * (2.0 - rho)),
        "output_weight": rho**2 / (1.0 - rho**2),
    }


_DEFAULTS = {"gd": gd_defaults, "heavy_ball": heavy_ball_defaults, "tmm": tmm_defaults}


def default_baseline_params(method: str, bounds: SectorBounds) -> BaselineParams:
    if method not in METHODS:
        raise ValueError(f"unknown baseline method {method!r}")
    return BaselineParams(method=method, coefficients=_DEFAULTS[method](bounds))


def gd_step(state: PointState, oracle: CostOracle, step: float) -> PointState:
    g = _checked_gradient(oracle, state.x, state.t, state.t)
    return PointState(x=state.x - step * g, t=state.t + 1)


def heavy_ball_step(
    state: RecursionState, oracle: CostOracle, step: float, momentum: float
) -> RecursionState:
    g = _checked_gradient(oracle, state.x_curr, state.t, state.t)
    x_next = state.x_curr - step * g + momentum * (state.x_curr - state.x_prev)
    return RecursionState(x_prev=state.x_curr, x_curr=x_next, t=state.t + 1)


def tmm_step(
    state: TmmState,
    oracle: CostOracle,
    step: float,
    momentum: float,
    query_weight: float,
) -> TmmState:
    y = (1.0 + query_weight) * state.xi_curr - query_weight * state.xi_prev
    g = _checked_gradient(oracle, y, state.t, state.t)
    xi_next = (
        (1.0 + momentum) * state.xi_curr - momentum * state.xi_prev - step * g
    )
    return TmmState(xi_prev=state.xi_curr, xi_curr=xi_next, t=state.t + 1)


def tmm_output(state: TmmState, output_weight: float) -> np.ndarray:
    return (1.0 + output_weight) * state.xi_curr - output_weight * state.xi_prev


def run_baseline(
    oracle: CostOracle,
    method: str,
    x0,
    T: int,
    params: BaselineParams | None = None,
) -> Trajectory:
    """Simulate one baseline for T steps from x0 and record error norms.

    Two-sequence and three-sequence methods initialize every internal
    sequence at x0.  Faults propagate like the tracker's, with the partial
    trajectory attached.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    x0 = _vector(x0, "x0")
    if x0.size != oracle.dimension:
        raise ValueError("x0 must match the oracle dimension")
    if params is None:
        params = default_baseline_params(method, oracle.bounds)
    elif params.method != method:
        raise ValueError(f"params are for {params.method!r}, not {method!r}")
    c = params.coefficients

    iterates = np.empty((T + 1, x0.size))
    iterates[0] = x0
    filled = 0
    try:
        if method == "gd":
            state = PointState(x=x0, t=0)
            for _ in range(T):
                state = gd_step(state, oracle, c["step"])
                iterates[state.t] = state.x
                filled = state.t
        elif method == "heavy_ball":
            state = RecursionState(x_prev=x0, x_curr=x0, t=0)
            for _ in range(T):
                state = heavy_ball_step(state, oracle, c["step"], c["momentum"])
                iterates[state.t] = state.x_curr
                filled = state.t
        else:  # tmm
            state = TmmState(xi_prev=x0, xi_curr=x0, t=0)
            for _ in range(T):
                state = tmm_step(
                    state, oracle, c["step"], c["momentum"], c["query_weight"]
                )
                iterates[state.t] = tmm_output(state, c["output_weight"])
                filled = state.t
    except SimulationFault as fault:
        partial = _baseline_trajectory(iterates[: filled + 1], oracle, params)
        raise SimulationFault(str(fault), t=fault.t, partial=partial) from None

    return _baseline_trajectory(iterates, oracle, params)


def _baseline_trajectory(
    iterates: np.ndarray, oracle: CostOracle, params: BaselineParams
) -> Trajectory:
    ts = np.arange(iterates.shape[0])
    optima = oracle.trajectory.x_star0 + ts[:, None] * oracle.trajectory.velocity
    errors = np.linalg.norm(iterates - optima, axis=1)
    return Trajectory(
        iterates=iterates,
        optima=optima,
        errors=errors,
        params=params,
        label=oracle.label,
        method=params.method,
    )
