"""Hybridized Nitsche coupling of plane-stress subdomains through interface beams.

Thin wrapper over the compiled ``_core`` module. Scenario configs are plain
dicts with the same layout as the CLI's JSON files.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    GeometryError,
    InputError,
    IoError,
    NitscheError,
    SolverError,
    convergence,
    hermite_bending_stiffness,
    patch_test,
    truss_stiffness,
)

PROFILE_COLUMNS = ("segment", "s", "u_n", "u_t", "theta", "jump_n_1", "jump_n_2", "sigma_n_1", "sigma_n_2")


def builtin_scenarios():
    return list(_core.builtin_scenario_names())


def scenario(name, **overrides):
    """Built-in scenario as a dict. Keyword overrides use dotted keys with
    '__' in place of '.', e.g. ``section__EI=1e4``."""
    cfg = json.loads(_core.builtin_scenario_json(name))
    for key, value in overrides.items():
        node = cfg
        *parents, leaf = key.split("__")
        for p in parents:
            node = node.setdefault(p, {})
        node[leaf] = value
    return cfg


def validate(config):
    """Normalized copy of `config`; raises ConfigError on bad input."""
    return json.loads(_core.validate_json(json.dumps(config)))


def run(config, out_dir=None):
    """Solve one scenario.

    Returns a dict with ``summary`` (dict), ``profile`` (array with
    PROFILE_COLUMNS), ``interface`` (ux, uy, theta per interface node),
    ``values`` (full DOF vector) and ``files`` (written outputs).
    """
    res = _core.run_json(json.dumps(config), "" if out_dir is None else str(out_dir))
    res["summary"] = json.loads(res["summary"])
    return res


__all__ = [
    "ConfigError",
    "GeometryError",
    "InputError",
    "IoError",
    "NitscheError",
    "PROFILE_COLUMNS",
    "SolverError",
    "builtin_scenarios",
    "convergence",
    "hermite_bending_stiffness",
    "patch_test",
    "run",
    "scenario",
    "truss_stiffness",
    "validate",
]
