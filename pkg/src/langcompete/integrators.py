"""Fixed-step RK4 integration, steady-state search, convergence time.

The system is smooth and low-dimensional, so a fixed-step classic
Runge-Kutta scheme keeps sweeps deterministic and directly comparable
across parameter values.  After every step the state is clamped to
[0, 1] componentwise and renormalized onto the simplex; the measured
correction must stay below a strict per-step budget (1e-9) or the run
aborts rather than silently drifting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import ModelParams, validate_state

__all__ = [
    "Trajectory",
    "SteadyStateResult",
    "SteadyOptions",
    "IntegrationError",
    "StabilityError",
    "NotConvergedError",
    "integrate",
    "find_steady_state",
    "convergence_time",
]


class IntegrationError(RuntimeError):
    """Base class for integration failures."""


class StabilityError(IntegrationError):
    """Renormalization drift exceeded its budget or state went non-finite."""


class NotConvergedError(IntegrationError):
    """A steady state was required but not reached within t_max."""


@dataclass(frozen=True)
class Trajectory:
    """Recorded integration output: times (years) and one state per time."""

    times: np.ndarray
    states: np.ndarray
    params: ModelParams


@dataclass(frozen=True)
class SteadyStateResult:
    """Outcome of a steady-state search.

    ``convergence_time`` is the integration time at which the derivative
    tolerance was first met (None when not converged); the band-based
    last-exit time is computed separately by :func:`convergence_time`.
    """

    final_state: np.ndarray
    converged: bool
    convergence_time: float | None
    steps_taken: int


@dataclass(frozen=True)
class SteadyOptions:
    """Knobs shared by the steady-state and convergence-time searches.

    t_max defaults generously to 1e6 years: typical runs settle within
    ~1e3 years but critical slowing near tipping points needs headroom.
    """

    step: float = 0.01
    t_max: float = 1e6
    derivative_tolerance: float = 1e-9
    band_delta: float = 1e-4
    record_every: int = 100

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be > 0")
        if not self.t_max > 0:
            raise ValueError("t_max must be > 0")
        if not self.derivative_tolerance > 0:
            raise ValueError("derivative_tolerance must be > 0")
        if not self.band_delta > 0:
            raise ValueError("band_delta must be > 0")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    @property
    def max_steps(self) -> int:
        return int(np.ceil(self.t_max / self.step - 1e-9))


def _raise_for_status(status: int, step_index: int, step: float):
    if status == 1:
        raise StabilityError(
            f"renormalization correction exceeded {_kernels.DRIFT_BUDGET:g} "
            f"at step {step_index} (t = {step_index * step:g})"
        )
    if status == 2:
        raise StabilityError(
            f"non-finite state at step {step_index} (t = {step_index * step:g})"
        )


def integrate(
    params: ModelParams,
    x0,
    t_end: float,
    step: float = 0.01,
    record_every: int = 1,
) -> Trajectory:
    """Integrate the ODE from ``x0`` to ``t_end`` years.

    Records (0, x0) first, then every ``record_every``-th step, and always
    the final state at ``t_end``.  If ``t_end`` is not an exact multiple
    of ``step`` the last step is shortened to land on it.
    """
    if not step > 0:
        raise ValueError("step must be > 0")
    if not t_end > 0:
        raise ValueError("t_end must be > 0")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    x = validate_state(x0, params.n).copy()
    s = params.utilities
    beta, ma = params.beta, params.minority_aversion

    n_full = int(np.floor(t_end / step + 1e-9))
    remainder = t_end - n_full * step
    if remainder < step * 1e-9:
        remainder = 0.0

    rec = np.empty((n_full // record_every + 1, params.n))
    nrec, steps_done, status = _kernels.integrate_record(
        s, beta, ma, x, step, n_full, record_every, rec
    )
    _raise_for_status(status, steps_done, step)

    times = [0.0]
    states = [validate_state(x0, params.n)]
    rec_steps = np.arange(1, nrec + 1) * record_every
    for k in range(nrec):
        times.append(rec_steps[k] * step)
        states.append(rec[k].copy())

    if remainder > 0.0:
        one = np.empty((1, params.n))
        _, _, status = _kernels.integrate_record(
            s, beta, ma, x, remainder, 1, 1, one
        )
        _raise_for_status(status, n_full + 1, step)
        times.append(t_end)
        states.append(one[0].copy())
    elif times[-1] < n_full * step:
        times.append(n_full * step)
        states.append(x.copy())

    return Trajectory(
        times=np.asarray(times), states=np.asarray(states), params=params
    )


def find_steady_state(
    params: ModelParams, x0, options: SteadyOptions = SteadyOptions()
) -> SteadyStateResult:
    """Integrate until ||dx/dt||_inf falls below the derivative tolerance.

    The final state is returned whether or not the tolerance was met
    within t_max; ``converged`` says which case occurred.
    """
    x = validate_state(x0, params.n)
    xf, steps, converged, status = _kernels.run_to_steady(
        params.utilities,
        params.beta,
        params.minority_aversion,
        x,
        options.step,
        options.max_steps,
        options.derivative_tolerance,
    )
    _raise_for_status(status, steps, options.step)
    return SteadyStateResult(
        final_state=xf,
        converged=bool(converged),
        convergence_time=steps * options.step if converged else None,
        steps_taken=int(steps),
    )


def _steady_banded(params: ModelParams, x0, options: SteadyOptions):
    """Shared driver: steady-state search plus recorded trajectory."""
    x = validate_state(x0, params.n)
    max_rec = options.max_steps // options.record_every + 2
    rec = np.empty((max_rec, params.n))
    rect = np.empty(max_rec)
    nrec, steps, converged, status = _kernels.run_to_steady_banded(
        params.utilities,
        params.beta,
        params.minority_aversion,
        x,
        options.step,
        options.max_steps,
        options.derivative_tolerance,
        options.record_every,
        rec,
        rect,
    )
    _raise_for_status(status, steps, options.step)
    result = SteadyStateResult(
        final_state=rec[nrec - 1].copy(),
        converged=bool(converged),
        convergence_time=steps * options.step if converged else None,
        steps_taken=int(steps),
    )
    return result, rec[:nrec], rect[:nrec]


def _tau_last_exit(rec, rect, x_star, band_delta: float) -> float:
    """Smallest recorded t such that the trajectory stays within the band
    of ``x_star`` for every recorded time >= t (backward scan)."""
    dev = np.max(np.abs(rec - x_star[None, :]), axis=1)
    outside = np.nonzero(dev > band_delta)[0]
    if outside.size == 0:
        return float(rect[0])
    return float(rect[outside[-1] + 1])


def convergence_time(
    params: ModelParams, x0, options: SteadyOptions = SteadyOptions()
) -> float:
    """Last-exit time tau into the band_delta neighborhood of the steady state.

    Runs the steady-state search, then scans the recorded trajectory
    backward: tau is the earliest recorded time after which the sup-norm
    distance to the converged state never exceeds band_delta again.
    Raises NotConvergedError instead of fabricating a value when the run
    does not converge within t_max.
    """
    result, rec, rect = _steady_banded(params, x0, options)
    if not result.converged:
        raise NotConvergedError(
            f"no steady state within t_max = {options.t_max:g} years "
            f"(residual derivative norm above {options.derivative_tolerance:g})"
        )
    return _tau_last_exit(rec, rect, result.final_state, options.band_delta)
