"""Parameter/state types and the transition-rate kernel of the model.

The dynamical system tracks the fractions x_1..x_n of a population
speaking each of n competing languages.  A speaker of language ``src``
adopts language ``dest`` at per-capita rate

    rate(src -> dest) = s_dest * x_dest**beta * (1 - x_src)**ma

where s_i is the utility of language i (all utilities sum to 1), ``beta``
is the majority-preference exponent (attraction toward languages with
many speakers) and ``ma`` is the minority-aversion exponent (repulsion
from staying in a shrinking language).  For n = 2 this reduces to the
classical Abrams-Strogatz rate s * x**(beta + ma).

Note on conventions: some statements of the n-language generalization
index the rate matrix ambiguously.  This module fixes the convention
stated above -- adoption of a language is driven by that language's own
utility and speaker base -- which is the only reading that recovers the
two-language Abrams-Strogatz form and conserves total population.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

__all__ = ["ModelParams", "validate_state", "transition_rate", "derivative"]

#: absolute tolerance for "sums to one" checks on utilities and states
SIMPLEX_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Full parameter vector of the n-language competition system.

    The alpha exponent of the classic model is never stored; interfaces
    everywhere take (beta, minority_aversion) with alpha implicitly
    beta + minority_aversion.
    """

    beta: float
    minority_aversion: float
    utilities: np.ndarray
    language_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        u = np.ascontiguousarray(np.asarray(self.utilities, dtype=np.float64))
        if u.ndim != 1 or u.shape[0] < 2:
            raise ValueError("utilities must be a 1-d vector of length >= 2")
        names = tuple(self.language_names)
        if not names:
            names = tuple(f"lang{i}" for i in range(u.shape[0]))
        if len(names) != u.shape[0]:
            raise ValueError(
                f"{len(names)} language names for {u.shape[0]} utilities"
            )
        if not (self.beta >= 0.0):
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if not (self.minority_aversion >= 0.0):
            raise ValueError(
                f"minority_aversion must be >= 0, got {self.minority_aversion}"
            )
        if not (u > 0.0).all():
            raise ValueError("every utility must be > 0")
        if abs(u.sum() - 1.0) > SIMPLEX_ATOL:
            raise ValueError(
                f"utilities must sum to 1 within {SIMPLEX_ATOL}, got {u.sum()!r}"
            )
        u.setflags(write=False)
        object.__setattr__(self, "utilities", u)
        object.__setattr__(self, "language_names", names)
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(
            self, "minority_aversion", float(self.minority_aversion)
        )

    @property
    def n(self) -> int:
        """Number of competing languages."""
        return self.utilities.shape[0]

    def index_of(self, language: str) -> int:
        """Index of a language by name."""
        try:
            return self.language_names.index(language)
        except ValueError:
            raise ValueError(
                f"unknown language {language!r}; have {self.language_names}"
            ) from None


def validate_state(x, n: int | None = None, atol: float = SIMPLEX_ATOL) -> np.ndarray:
    """Check that ``x`` is a valid point on the population simplex.

    Returns the state as a float64 array.  Components must lie in [0, 1]
    (roundoff excursions up to ``atol`` are tolerated and preserved) and
    sum to 1 within ``atol``.
    """
    xv = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if xv.ndim != 1:
        raise ValueError("state must be a 1-d vector")
    if n is not None and xv.shape[0] != n:
        raise ValueError(f"state has {xv.shape[0]} components, expected {n}")
    if not np.isfinite(xv).all():
        raise ValueError("state contains non-finite values")
    if (xv < -atol).any() or (xv > 1.0 + atol).any():
        raise ValueError(f"state components outside [0, 1]: {xv!r}")
    if abs(xv.sum() - 1.0) > atol:
        raise ValueError(f"state must sum to 1 within {atol}, got {xv.sum()!r}")
    return xv


def transition_rate(params: ModelParams, x, dest: int, src: int) -> float:
    """Per-capita rate at which a speaker of ``src`` adopts ``dest``.

    Evaluates s_dest * x_dest**beta * (1 - x_src)**ma with the bases
    clamped to [0, 1] against roundoff and the 0**0 == 1 convention for
    exact zero exponents.
    """
    xv = validate_state(x, params.n)
    nlang = params.n
    if not (0 <= dest < nlang) or not (0 <= src < nlang):
        raise ValueError(f"language index out of range for n={nlang}")
    if dest == src:
        raise ValueError("transition requires two distinct languages")
    x_dest = min(max(float(xv[dest]), 0.0), 1.0)
    x_src = min(max(float(xv[src]), 0.0), 1.0)
    return (
        float(params.utilities[dest])
        * x_dest ** params.beta
        * (1.0 - x_src) ** params.minority_aversion
    )


def derivative(params: ModelParams, x) -> np.ndarray:
    """Time derivative dx/dt of the speaker fractions.

    dx_i/dt = sum_{j != i} x_j * rate(j -> i) - x_i * sum_{j != i} rate(i -> j).
    Components sum to zero (total population is conserved) and every
    simplex vertex is a fixed point when both exponents are positive.
    """
    xv = validate_state(x, params.n)
    out = np.empty_like(xv)
    _kernels.derivative_into(
        params.utilities, params.beta, params.minority_aversion, xv, out
    )
    return out
