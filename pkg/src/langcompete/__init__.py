"""langcompete: competition dynamics among n languages.

A numerical library for the n-language generalization of the
Abrams-Strogatz competition model: forward simulation, parameter
estimation from census time series, steady-state classification,
convergence-time (critical-slowdown) analysis, and 1D/2D parameter
sweeps, plus CSV/JSON export of every result.
"""

from .model import ModelParams, derivative, transition_rate, validate_state
from .integrators import (
    IntegrationError,
    NotConvergedError,
    StabilityError,
    SteadyOptions,
    SteadyStateResult,
    Trajectory,
    convergence_time,
    find_steady_state,
    integrate,
)
from .fitting import (
    FitConfig,
    FitResult,
    fit,
    objective_d,
    predict_at_observations,
    simplex_grid,
)
from .analysis import (
    DEFAULT_EXTINCTION_THRESHOLD,
    Outcome,
    PhaseCell,
    SweepPoint,
    bias_sweep,
    classify,
    initial_fraction_sweep,
    phase_diagram,
    set_initial_fraction,
    set_utility,
    utility_sweep,
)
from .data_io import (
    Dataset,
    Fixture,
    ParseError,
    bundled_fixtures,
    export,
    load_dataset,
    normalize_rows,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "derivative", "transition_rate", "validate_state",
    "IntegrationError", "NotConvergedError", "StabilityError",
    "SteadyOptions", "SteadyStateResult", "Trajectory",
    "convergence_time", "find_steady_state", "integrate",
    "FitConfig", "FitResult", "fit", "objective_d",
    "predict_at_observations", "simplex_grid",
    "DEFAULT_EXTINCTION_THRESHOLD", "Outcome", "PhaseCell", "SweepPoint",
    "bias_sweep", "classify", "initial_fraction_sweep", "phase_diagram",
    "set_initial_fraction", "set_utility", "utility_sweep",
    "Dataset", "Fixture", "ParseError", "bundled_fixtures", "export",
    "load_dataset", "normalize_rows",
    "__version__",
]
