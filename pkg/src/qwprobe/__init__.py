"""Discrete-time quantum walks as probes of their own coin parameter."""

from .fisher import (
    DetectorWindow,
    PositionDensity,
    classical_fi,
    cramer_rao_bound,
    full_qfi,
    limited_fi,
    position_qfi_exact,
    position_qfi_paper,
    probability_derivative,
    reduce_position,
)
from .interference import InterferenceMap, first_divergence, mu_at, mu_field, mu_map
from .tangent import (
    TangentState,
    evolve_split_tangent,
    evolve_tangent,
    fd_check,
    new_tangent,
    split_step_with_tangent,
    step_with_tangent,
)
from .walk import (
    PLUS,
    Bounded,
    CapacityError,
    InitialSpin,
    PositionDistribution,
    SplitStepSpec,
    Unbounded,
    WalkState,
    evolve,
    evolve_split,
    new_walk,
    probability,
    split_step,
    std_dev,
    step,
)

__version__ = "0.1.0"
