"""Macrorealism tests for an oscillating two-level system under unsharp measurements."""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    MacrorealError,
    NonMonotoneError,
    NullEventError,
    ResourceError,
    UnknownSpecError,
)
from .inequalities import (
    InequalitySpec,
    ViolationResult,
    evaluate,
    evaluate_named,
    get_spec,
    lgi_kn,
    nsit_delta,
    wlgi3_catalog,
    wlgi_n,
)
from .montecarlo import estimate_inequality
from .optimize import catalog_max, critical_lambda, lgi_critical_lambda, lgi_max, maximize_violation
from .oracle import certify, certify_catalog, classical_max, residual_terms
from .qm import Effect, ModelParams, QubitState, effects, evolution_unitary, evolve, initial_state, luders_update
from .sequences import Event, MeasurementPlan, correlation, joint_probability, single_time_probability
