"""Trace CSV and report JSON writers.

Trace numbers use 12 significant digits with no locale so traces are
byte-identical across runs and platforms.
"""
import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import SPEC_VERSION, TRACE_SIGNIFICANT_DIGITS
from game.core import Action, FiniteSpace, Game, StrategyProfile
from solvers.dynamics import Trajectory

logger = logging.getLogger(__name__)


def format_number(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drops the sign of -0.0
    return format(x, f'.{TRACE_SIGNIFICANT_DIGITS}g')


def format_action(space, action: Action) -> str:
    if isinstance(space, FiniteSpace):
        return f"#{space.index_of(action)}"
    return format_number(action)


def trace_header(n_players: int) -> List[str]:
    return (["step", "movers"]
            + [f"action_{i}" for i in range(n_players)]
            + [f"utility_{i}" for i in range(n_players)])


def render_trace(game: Game, trajectory: Trajectory) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(trace_header(game.n_players))
    for record in trajectory.steps:
        writer.writerow(
            [str(record.iteration), ";".join(str(i) for i in record.movers)]
            + [format_action(s, a) for s, a in zip(game.spaces, record.profile)]
            + [format_number(u) for u in record.utilities]
        )
    return buffer.getvalue()


def write_trace(game: Game, trajectory: Trajectory, path: str) -> None:
    Path(path).write_text(render_trace(game, trajectory), encoding='utf-8')
    logger.info(f"Wrote {len(trajectory.steps)} trace rows to {path}")


# --- Reports ---

def action_to_json(space, action: Action) -> Any:
    if isinstance(space, FiniteSpace):
        return space.label(space.index_of(action))
    return float(action)


def profile_to_json(game: Game, profile: Optional[StrategyProfile]) -> Optional[List[Any]]:
    if profile is None:
        return None
    return [action_to_json(s, a) for s, a in zip(game.spaces, profile)]


def build_report(command: str, game_spec: Dict[str, Any], seed: Optional[int],
                 result: Dict[str, Any], diagnostics: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "command": command,
        "game": game_spec,
        "seed": seed,
        "result": result,
        "diagnostics": diagnostics,
        "spec_version": SPEC_VERSION,
    }


def write_report(report: Dict[str, Any], path: str) -> None:
    # Rendered in full before touching the file so a failure never leaves half a report.
    text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    Path(path).write_text(text, encoding='utf-8')
    logger.info(f"Wrote {report['command']} report to {path}")
