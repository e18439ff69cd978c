"""The two-step tracking recursion and its feedback state-space realization.

One parameter pair (alpha, gamma) drives both engines:

    x(t+1) = 2 x(t) - x(t-1) - alpha * g(x(t), t) + gamma * g(x(t-1), t-1)

where g is the cost gradient.  The unit-weighted difference x(t) - x(t-1)
gives the update a double integrator, which is what cancels a constant drift
of the optimum.  The equivalent feedback form keeps the state (w, x) with
w(t) = x(t-1) + gamma * u(t-1), u(t) = -g(x(t), t):

    w(t+1) = x(t) + gamma * u(t)
    x(t+1) = -w(t) + 2 x(t) + alpha * u(t)

Both engines agree to rounding error for any oracle and initialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .oracles import CostOracle, _vector

# Time stamp used for the delayed gradient term.  "previous" evaluates
# g(x(t-1), t-1), which is what the feedback realization produces and what
# makes ramp tracking exact.  "current" evaluates g(x(t-1), t) instead; on a
# moving problem that variant settles at a constant offset -gamma*a/(alpha-gamma)
# and is kept only as a diagnostic.
DELAYED_PREVIOUS = "previous"
DELAYED_CURRENT = "current"


class SimulationFault(RuntimeError):
    """Non-finite gradient encountered at step t; partial run is attached."""

    def __init__(self, message: str, t: int, partial: Optional["Trajectory"] = None):
        super().__init__(message)
        self.t = t
        self.partial = partial


@dataclass(frozen=True)
class TrackerParams:
    """Gradient step alpha > 0 and delayed-gradient weight gamma."""

    alpha: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha}")
        if not np.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma}")


@dataclass(frozen=True)
class RecursionState:
    x_prev: np.ndarray
    x_curr: np.ndarray
    t: int


@dataclass(frozen=True)
class LureState:
    w: np.ndarray
    x: np.ndarray
    t: int


@dataclass(frozen=True)
class Trajectory:
    """Simulated iterates x(0..T) with the optimum path and error norms."""

    iterates: np.ndarray  # (T+1, n)
    optima: np.ndarray  # (T+1, n)
    errors: np.ndarray  # (T+1,)
    params: object
    label: str
    method: str = "tracker"

    @property
    def final_error(self) -> float:
        return float(self.errors[-1])


def _checked_gradient(oracle: CostOracle, x: np.ndarray, t: int, fault_t: int) -> np.ndarray:
    g = oracle.grad(x, t)
    if not np.all(np.isfinite(g)):
        raise SimulationFault(f"non-finite gradient at t={fault_t}", t=fault_t)
    return g


def step_recursion(
    state: RecursionState,
    oracle: CostOracle,
    params: TrackerParams,
    delayed_gradient_time: str = DELAYED_PREVIOUS,
) -> RecursionState:
    """Advance the two-step recursion by one iteration."""
    if delayed_gradient_time not in (DELAYED_PREVIOUS, DELAYED_CURRENT):
        raise ValueError(f"unknown delayed_gradient_time {delayed_gradient_time!r}")
    t = state.t
    g_curr = _checked_gradient(oracle, state.x_curr, t, t)
    t_delayed = t if delayed_gradient_time == DELAYED_CURRENT else t - 1
    g_prev = _checked_gradient(oracle, state.x_prev, t_delayed, t)
    x_next = (
        2.0 * state.x_curr
        - state.x_prev
        - params.alpha * g_curr
        + params.gamma * g_prev
    )
    return RecursionState(x_prev=state.x_curr, x_curr=x_next, t=t + 1)


def lure_matrices(params: TrackerParams, n: int):
    """Block matrices (A, B, C) of the feedback realization in dimension n.

    A = A0 kron I_n and so on, with A0 = [[0, 1], [-1, 2]], B0 = [gamma; alpha],
    C0 = [0, 1].  The state stacks [w; x] and the readout C X returns x.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a0 = np.array([[0.0, 1.0], [-1.0, 2.0]])
    b0 = np.array([[params.gamma], [params.alpha]])
    c0 = np.array([[0.0, 1.0]])
    eye = np.eye(n)
    return np.kron(a0, eye), np.kron(b0, eye), np.kron(c0, eye)


def lure_init(x0, x1, oracle: CostOracle, params: TrackerParams) -> LureState:
    """State at t = 1: w(1) = x(0) + gamma * u(0) with u(0) = -g(x(0), 0)."""
    x0 = _vector(x0, "x0")
    x1 = _vector(x1, "x1")
    u0 = -_checked_gradient(oracle, x0, 0, 0)
    return LureState(w=x0 + params.gamma * u0, x=x1, t=1)


def step_lure(state: LureState, oracle: CostOracle, params: TrackerParams) -> LureState:
    """Advance the feedback realization by one iteration."""
    t = state.t
    u = -_checked_gradient(oracle, state.x, t, t)
    w_next = state.x + params.gamma * u
    x_next = -state.w + 2.0 * state.x + params.alpha * u
    return LureState(w=w_next, x=x_next, t=t + 1)


def run(
    oracle: CostOracle,
    params: TrackerParams,
    x0,
    x1=None,
    T: int = 1000,
    engine: str = "recursion",
    delayed_gradient_time: str = DELAYED_PREVIOUS,
) -> Trajectory:
    """Simulate x(0..T) and the per-step error norms.

    x1 defaults to x0 when only one initial point is supplied.  Divergence is
    not an error; runs are returned intact as long as the iterates stay
    finite.  A non-finite gradient raises SimulationFault carrying the partial
    trajectory simulated so far.
    """
    if T < 2:
        raise ValueError("T must be >= 2")
    x0 = _vector(x0, "x0")
    x1 = x0.copy() if x1 is None else _vector(x1, "x1")
    if x0.size != oracle.dimension or x1.size != oracle.dimension:
        raise ValueError("initial points must match the oracle dimension")

    n = oracle.dimension
    iterates = np.empty((T + 1, n))
    iterates[0] = x0
    iterates[1] = x1

    if engine == "recursion":
        state = RecursionState(x_prev=x0, x_curr=x1, t=1)

        def advance(s):
            return step_recursion(s, oracle, params, delayed_gradient_time)

        def position(s):
            return s.x_curr

    elif engine == "lure":
        if delayed_gradient_time != DELAYED_PREVIOUS:
            raise ValueError(
                "the feedback engine freezes the delayed gradient when it is "
                "computed and cannot re-evaluate it at the current time"
            )
        state = lure_init(x0, x1, oracle, params)

        def advance(s):
            return step_lure(s, oracle, params)

        def position(s):
            return s.x

    else:
        raise ValueError(f"unknown engine {engine!r}")

    filled = 1
    try:
        for _ in range(T - 1):
            state = advance(state)
            iterates[state.t] = position(state)
            filled = state.t
    except SimulationFault as fault:
        partial = _make_trajectory(iterates[: filled + 1], oracle, params)
        raise SimulationFault(str(fault), t=fault.t, partial=partial) from None

    return _make_trajectory(iterates, oracle, params)


def _make_trajectory(iterates: np.ndarray, oracle: CostOracle, params) -> Trajectory:
    ts = np.arange(iterates.shape[0])
    optima = oracle.trajectory.x_star0 + ts[:, None] * oracle.trajectory.velocity
    errors = np.linalg.norm(iterates - optima, axis=1)
    return Trajectory(
        iterates=iterates,
        optima=optima,
        errors=errors,
        params=params,
        label=oracle.label,
        method="tracker",
    )
