"""Three-valued logic programs: model checking, SLDNF-style solving and declarative debugging."""

import json

from . import _core
from ._core import Lp3Error

__all__ = ["Lp3Error", "check", "debug", "fitting", "run_cli", "solve"]


def solve(program, goal, rule="leftmost_delay", budget=10000, all=False):
    return json.loads(_core.solve_json(program, goal, rule, budget, all))


def check(program, interpretation, max_witnesses=5):
    """Reports for the four model conditions, keyed model/strong/completion/strong_completion."""
    return json.loads(_core.check_json(program, interpretation, max_witnesses))


def fitting(program, interpretation):
    """Fitting least fixpoint over the universe declared in `interpretation`."""
    return json.loads(_core.fitting_json(program, interpretation))


def debug(program, goal, interpretation, mode="wrong", rule="leftmost_delay", budget=10000):
    """Debugs `goal` with `interpretation` as the oracle. diagnosis is None when no bug is found."""
    return json.loads(_core.debug_json(program, goal, interpretation, mode, rule, budget))


def run_cli(args, input=""):
    """Runs one lp3 command in process; returns (exit code, stdout, stderr)."""
    return _core.run_cli(list(args), input)
