"""Steady-state classification and the sweep experiments.

A converged state is classified by an extinction threshold: languages
below it are extinct, and the system is in a dominance state when
exactly one language survives, otherwise in coexistence.  Sweeps move a
single quantity (one utility, one bias exponent, or one language's
initial fraction), rerun the steady-state search from a fixed starting
point, classify, and record the convergence time; a two-dimensional
sweep over both bias exponents yields the phase diagram.

Sweep points and phase cells are independent computations assembled
positionally, so output files are identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .integrators import SteadyOptions, _steady_banded, _tau_last_exit, find_steady_state
from .model import ModelParams, validate_state

__all__ = [
    "Outcome",
    "SweepPoint",
    "PhaseCell",
    "classify",
    "set_utility",
    "set_initial_fraction",
    "utility_sweep",
    "bias_sweep",
    "initial_fraction_sweep",
    "phase_diagram",
    "DEFAULT_EXTINCTION_THRESHOLD",
]

#: population fraction below which a language counts as extinct; separates
#: near-vertex dominance endpoints from genuine coexistence robustly
DEFAULT_EXTINCTION_THRESHOLD = 1e-3


@dataclass(frozen=True)
class Outcome:
    """Classified steady state.

    kind is "dominance" iff exactly one language survives; most_popular
    is the argmax fraction (ties broken toward the lowest index) and
    dominant equals it in a dominance state, else None.
    """

    kind: str
    survivors: frozenset[int]
    extinct: frozenset[int]
    most_popular: int
    dominant: int | None
    final_state: np.ndarray


@dataclass(frozen=True)
class SweepPoint:
    """One sweep sample: the modified inputs and the classified result.

    ``outcome`` is None when the point did not converge within t_max;
    the (non-steady) final state is still exposed for inspection.
    """

    swept_value: float
    params: ModelParams
    x0: np.ndarray
    outcome: Outcome | None
    convergence_time: float | None
    final_state: np.ndarray


@dataclass(frozen=True)
class PhaseCell:
    """One phase-diagram cell; kind is "unresolved" for non-converged runs."""

    beta: float
    minority_aversion: float
    most_popular: int | None
    kind: str


def classify(
    x_star,
    extinction_threshold: float = DEFAULT_EXTINCTION_THRESHOLD,
    n: int | None = None,
) -> Outcome:
    """Classify a converged state into dominance or coexistence."""
    xv = validate_state(x_star, n)
    if not (0.0 < extinction_threshold < 1.0 / xv.shape[0]):
        raise ValueError(
            f"extinction_threshold must be in (0, 1/n), got {extinction_threshold}"
        )
    alive = xv >= extinction_threshold
    assert alive.any(), "simplex state cannot be entirely below threshold"
    survivors = frozenset(int(i) for i in np.nonzero(alive)[0])
    extinct = frozenset(int(i) for i in np.nonzero(~alive)[0])
    most_popular = int(np.argmax(xv))  # argmax takes the lowest index on ties
    kind = "dominance" if len(survivors) == 1 else "coexistence"
    return Outcome(
        kind=kind,
        survivors=survivors,
        extinct=extinct,
        most_popular=most_popular,
        dominant=most_popular if kind == "dominance" else None,
        final_state=xv,
    )


def _rescale_except(values: np.ndarray, target: int, value: float) -> np.ndarray:
    """Set entry ``target`` to ``value`` and rescale the rest proportionally."""
    old = float(values[target])
    if not (0.0 < value < 1.0):
        raise ValueError(f"value must be in (0, 1), got {value}")
    if old >= 1.0:
        raise ValueError("cannot rescale: target already holds the whole mass")
    out = np.asarray(values, dtype=np.float64) * ((1.0 - value) / (1.0 - old))
    out[target] = value
    return out


def set_utility(params: ModelParams, target: int, value: float) -> ModelParams:
    """Return params with utility ``target`` set to ``value``.

    The remaining utilities are rescaled by (1 - value) / (1 - old), so
    their pairwise ratios are preserved and the simplex sum is exact.
    """
    if not (0 <= target < params.n):
        raise ValueError(f"language index out of range for n={params.n}")
    return ModelParams(
        beta=params.beta,
        minority_aversion=params.minority_aversion,
        utilities=_rescale_except(params.utilities, target, value),
        language_names=params.language_names,
    )


def set_initial_fraction(x0, target: int, value: float) -> np.ndarray:
    """Rebuild a start state with ``target``'s fraction set to ``value``,
    rescaling the other fractions proportionally (same rule as
    :func:`set_utility`, applied to fractions)."""
    xv = validate_state(x0)
    if not (0 <= target < xv.shape[0]):
        raise ValueError(f"language index out of range for n={xv.shape[0]}")
    return _rescale_except(xv, target, value)


def _run_point(args) -> SweepPoint:
    swept_value, params, x0, options, extinction_threshold = args
    result, rec, rect = _steady_banded(params, x0, options)
    if result.converged:
        tau = _tau_last_exit(rec, rect, result.final_state, options.band_delta)
        outcome = classify(result.final_state, extinction_threshold)
    else:
        tau = None
        outcome = None
    return SweepPoint(
        swept_value=float(swept_value),
        params=params,
        x0=x0,
        outcome=outcome,
        convergence_time=tau,
        final_state=result.final_state,
    )


def _map_points(tasks, jobs: int):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_point, tasks))
    return [_run_point(t) for t in tasks]


def utility_sweep(
    base: ModelParams,
    x0,
    target: int,
    values,
    options: SteadyOptions = SteadyOptions(),
    extinction_threshold: float = DEFAULT_EXTINCTION_THRESHOLD,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Steady-state outcome as one language's utility moves over a grid.

    Per-point non-convergence is recorded on the point (outcome None),
    never fatal to the sweep.
    """
    x0v = validate_state(x0, base.n)
    tasks = [
        (v, set_utility(base, target, float(v)), x0v, options, extinction_threshold)
        for v in values
    ]
    return _map_points(tasks, jobs)


def bias_sweep(
    base: ModelParams,
    x0,
    which: str,
    values,
    options: SteadyOptions = SteadyOptions(),
    extinction_threshold: float = DEFAULT_EXTINCTION_THRESHOLD,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Sweep one bias exponent ("beta" or "minority_aversion"); the other
    bias, the utilities, and the start state stay at base."""
    if which not in ("beta", "minority_aversion"):
        raise ValueError('which must be "beta" or "minority_aversion"')
    x0v = validate_state(x0, base.n)
    tasks = []
    for v in values:
        if which == "beta":
            p = ModelParams(
                beta=float(v),
                minority_aversion=base.minority_aversion,
                utilities=base.utilities,
                language_names=base.language_names,
            )
        else:
            p = ModelParams(
                beta=base.beta,
                minority_aversion=float(v),
                utilities=base.utilities,
                language_names=base.language_names,
            )
        tasks.append((v, p, x0v, options, extinction_threshold))
    return _map_points(tasks, jobs)


def initial_fraction_sweep(
    params: ModelParams,
    x0_base,
    target: int,
    values,
    options: SteadyOptions = SteadyOptions(),
    extinction_threshold: float = DEFAULT_EXTINCTION_THRESHOLD,
    jobs: int = 1,
) -> list[SweepPoint]:
    """Sweep one language's initial fraction; convergence time across this
    sweep peaks at tipping points (critical slowing down)."""
    x0v = validate_state(x0_base, params.n)
    tasks = [
        (v, params, set_initial_fraction(x0v, target, float(v)), options,
         extinction_threshold)
        for v in values
    ]
    return _map_points(tasks, jobs)


def _run_cell(args) -> PhaseCell:
    beta, ma, base, x0, options, extinction_threshold = args
    p = ModelParams(
        beta=float(beta),
        minority_aversion=float(ma),
        utilities=base.utilities,
        language_names=base.language_names,
    )
    result = find_steady_state(p, x0, options)
    if not result.converged:
        return PhaseCell(float(beta), float(ma), None, "unresolved")
    outcome = classify(result.final_state, extinction_threshold)
    return PhaseCell(float(beta), float(ma), outcome.most_popular, outcome.kind)


def phase_diagram(
    base: ModelParams,
    x0,
    beta_grid,
    ma_grid,
    options: SteadyOptions = SteadyOptions(),
    extinction_threshold: float = DEFAULT_EXTINCTION_THRESHOLD,
    jobs: int = 1,
) -> list[list[PhaseCell]]:
    """(most popular language, state kind) over a (beta, ma) grid.

    Utilities and the start state stay fixed at base; cell [i][j] holds
    the outcome for (beta_grid[i], ma_grid[j]).
    """
    beta_grid = np.asarray(beta_grid, dtype=np.float64)
    ma_grid = np.asarray(ma_grid, dtype=np.float64)
    if beta_grid.size == 0 or ma_grid.size == 0:
        raise ValueError("grids must be nonempty")
    if (beta_grid < 0).any() or (ma_grid < 0).any():
        raise ValueError("bias grids must be nonnegative")
    x0v = validate_state(x0, base.n)
    tasks = [
        (b, m, base, x0v, options, extinction_threshold)
        for b in beta_grid
        for m in ma_grid
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            flat = list(pool.map(_run_cell, tasks, chunksize=8))
    else:
        flat = [_run_cell(t) for t in tasks]
    ncols = ma_grid.shape[0]
    return [flat[i * ncols:(i + 1) * ncols] for i in range(beta_grid.shape[0])]
