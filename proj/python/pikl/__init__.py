"""Physics-informed kernel learning.

Thin wrappers over the compiled core. Scenario configs and reports are plain
dicts here and JSON text on the C++ side.
"""

import json

from . import _core
from ._core import (
    CapacityError,
    ConfigError,
    DimensionError,
    Domain,
    FactorizationError,
    GramSpec,
    HermitianMatrix,
    LinearDiffOp,
    ModeSet,
    NumericError,
    PiklError,
    PiklModel,
    SobolevScaling,
    assemble_c,
    assemble_m,
    effective_dimension,
    fit,
    loglog_slope,
    penalty_form,
    predict_dual,
    solve_wave,
    spectrum,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "DimensionError",
    "Domain",
    "FactorizationError",
    "GramSpec",
    "HermitianMatrix",
    "LinearDiffOp",
    "ModeSet",
    "NumericError",
    "PiklError",
    "PiklModel",
    "SobolevScaling",
    "assemble_c",
    "assemble_m",
    "effective_dimension",
    "fit",
    "loglog_slope",
    "penalty_form",
    "predict_dual",
    "run_scenario",
    "scenario_preset",
    "solve_wave",
    "spectrum",
]


def scenario_preset(name):
    """Preset scenario as a dict, ready to edit and pass to run_scenario."""
    return json.loads(_core.scenario_preset(name))


def run_scenario(config):
    """Run a scenario dict (or preset name) and return the report dict."""
    if isinstance(config, str):
        config = {"preset": config}
    return json.loads(_core.run_scenario(json.dumps(config)))
