"""Python bindings for the asimkit library."""

import json as _json

from ._asimkit import (
    InputError,
    Model,
    ParseError,
    Signature,
    UnsupportedFragment,
    check_asimulation as _check_asimulation,
    classify_bool,
    classify_connective,
    distinguishing_formula,
    eval_fo,
    eval_fragment,
    largest_asimulation as _largest_asimulation,
    run_experiment as _run_experiment,
    translate,
)

__all__ = [
    "InputError",
    "Model",
    "ParseError",
    "Signature",
    "UnsupportedFragment",
    "check_asimulation",
    "classify_bool",
    "classify_connective",
    "distinguishing_formula",
    "eval_fo",
    "eval_fragment",
    "largest_asimulation",
    "run_experiment",
    "translate",
]


def largest_asimulation(sig, m1, m2, preds=None):
    """Largest asimulation as {"relation": {"fwd": [...], "bwd": [...]}, "none": bool, "rounds": int}."""
    result = _largest_asimulation(sig, m1, m2, preds)
    result["relation"] = _json.loads(result["relation"])
    return result


def check_asimulation(sig, m1, m2, relation, preds=None):
    """Violations of a relation given as a dict or a JSON string; empty when it is an asimulation."""
    text = relation if isinstance(relation, str) else _json.dumps(relation)
    return [_json.loads(v) for v in _check_asimulation(sig, m1, m2, text, preds)]


def run_experiment(sig, seed=1, trials=5, max_size=3, depth=2, preorder=False):
    """One report dict per trial."""
    return [_json.loads(r) for r in _run_experiment(sig, seed, trials, max_size, depth, preorder)]
