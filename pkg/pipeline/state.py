from typing import Any, Dict, Optional, TypedDict

from game.core import Game, ValidationReport
from pipeline.run_config import RunConfig
from solvers.dynamics import Trajectory


class RunState(TypedDict):
    """Defines the state structure for one pass of the run pipeline graph."""
    config_path: str
    overrides: Dict[str, Any] # CLI values (seed, trace, report) that win over the file
    validate_only: bool # stop after building and validating the game
    config: Optional[RunConfig]
    game: Optional[Game]
    validation: Optional[ValidationReport]
    result: Optional[Dict[str, Any]] # command-specific report "result" block
    diagnostics: Optional[Dict[str, Any]]
    trajectory: Optional[Trajectory] # Dynamics only
    outcome_ok: bool # False for valid-but-negative outcomes (exit 2)
    summary: Optional[str] # the one line printed on stdout
    exit_code: int
    error: Optional[str] # To capture errors during execution


def initial_state(config_path: str, overrides: Optional[Dict[str, Any]] = None,
                  validate_only: bool = False) -> RunState:
    return {
        "config_path": config_path,
        "overrides": dict(overrides or {}),
        "validate_only": validate_only,
        "config": None,
        "game": None,
        "validation": None,
        "result": None,
        "diagnostics": None,
        "trajectory": None,
        "outcome_ok": False,
        "summary": None,
        "exit_code": 1,
        "error": None,
    }
