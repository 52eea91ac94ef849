"""Local applicability checks, operator and channel extraction, and signaling analysis."""

import json as _json

from ._loclab import (
    LoclabError,
    PureStateMap,
    Seed,
    Theory,
    TransFamily,
    __version__,
    bell_state,
    compose,
    convex_linearity_gap,
    extract_choi,
    extract_pure_operator,
    haar_unitary,
    lift_channel,
    lift_isometry,
    linear_map,
    partial_trace,
    random_density,
    random_kraus_channel,
    run_cli,
    zoo,
    zoo_map,
)
from . import _loclab

_DEFAULT_ENV_DIMS = (1, 2, 3, 4)


def check_all(family, trials=200, env_dims=_DEFAULT_ENV_DIMS, seed=0, tol=1e-8):
    """Axiom report as a dict."""
    return _json.loads(_loclab.check_all_json(family, trials, list(env_dims), seed, tol))


def certify(family, trials=200, env_dims=_DEFAULT_ENV_DIMS, seed=0, tol=1e-8):
    return _json.loads(_loclab.certify_json(family, trials, list(env_dims), seed, tol))


def nonlinearity_witness(f):
    return _json.loads(_loclab.nonlinearity_witness_json(f))
