"""Regularized arbitrary-order moment method for the 1D Boltzmann-BGK equation."""

from ._core import (
    BreakdownError,
    MacroState,
    MomentLayout,
    MultiIndex,
    Scenario,
    compare,
    dvm_reference,
    enumerate,
    field_presets,
    gauss_hermite,
    he_derivative,
    he_eval,
    he_max_root,
    magnitude_table,
    normalize_density,
    predicted_exponent,
    relaxation_time,
    run,
    scenario_from_config,
    shock_structure,
    shock_tube,
)

__all__ = [
    "BreakdownError",
    "MacroState",
    "MomentLayout",
    "MultiIndex",
    "Scenario",
    "compare",
    "dvm_reference",
    "enumerate",
    "field_presets",
    "gauss_hermite",
    "he_derivative",
    "he_eval",
    "he_max_root",
    "magnitude_table",
    "normalize_density",
    "predicted_exponent",
    "relaxation_time",
    "run",
    "scenario_from_config",
    "shock_structure",
    "shock_tube",
]
