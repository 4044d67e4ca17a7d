import logging

from game.core import validate_game
from game.errors import GameError
from game.library import build_game
from pipeline.commands import execute
from pipeline.run_config import load_run_config, serialize_run_config
from pipeline.serialization import build_report, write_report, write_trace
from pipeline.state import RunState

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


# --- Graph Nodes ---

def load_config_node(state: RunState) -> RunState:
    """Reads and validates the RunConfig document."""
    logger.info("--- Node: load_config ---")
    try:
        state['config'] = load_run_config(state['config_path'], state.get('overrides'))
    except GameError as e:
        logger.error(f"Invalid run configuration: {e}")
        state['error'] = f"config error: {e}"
    except Exception as e:
        logger.error(f"Unexpected failure loading {state['config_path']}: {e}", exc_info=True)
        state['error'] = f"config error: {e}"
    return state


def build_game_node(state: RunState) -> RunState:
    """Builds the game from its GameSpec and checks the action spaces."""
    logger.info("--- Node: build_game ---")
    if state.get('error'):
        logger.warning("Skipping game construction due to previous error.")
        return state

    spec = state['config'].game
    try:
        game = build_game(spec.kind, spec.params)
        report = validate_game(game)
        state['game'] = game
        state['validation'] = report
        if not report.ok:
            issues = "; ".join(f"player {p.player}: {', '.join(p.issues)}" for p in report.players if not p.ok)
            state['error'] = f"invalid game: {issues}"
        elif state.get('validate_only'):
            state['summary'] = (f"{spec.kind.value}: valid, {game.n_players} players, "
                                f"kakutani_spaces={report.kakutani_spaces}")
            state['exit_code'] = EXIT_OK
    except GameError as e:
        logger.error(f"Could not build {spec.kind.value}: {e}")
        state['error'] = f"game error: {e}"
    except Exception as e:
        logger.error(f"Unexpected failure building {spec.kind.value}: {e}", exc_info=True)
        state['error'] = f"game error: {e}"
    return state


def execute_command_node(state: RunState) -> RunState:
    """Runs the configured command on the built game."""
    logger.info("--- Node: execute_command ---")
    if state.get('error'):
        logger.warning("Skipping command execution due to previous error.")
        return state

    config = state['config']
    try:
        outcome = execute(config, state['game'])
        state['result'] = outcome.result
        state['diagnostics'] = outcome.diagnostics
        state['trajectory'] = outcome.trajectory
        state['outcome_ok'] = outcome.ok
        state['summary'] = outcome.summary
        logger.info(f"{config.command.value} finished, ok={outcome.ok}")
    except GameError as e:
        logger.error(f"{config.command.value} failed: {e}")
        state['error'] = f"{config.command.value} failed: {e}"
    except Exception as e:
        logger.error(f"Unexpected failure in {config.command.value}: {e}", exc_info=True)
        state['error'] = f"{config.command.value} failed: {e}"
    return state


def write_outputs_node(state: RunState) -> RunState:
    """Writes the trace and report files, then fixes the exit code."""
    logger.info("--- Node: write_outputs ---")
    if state.get('error'):
        logger.warning("Skipping output files due to previous error.")
        state['exit_code'] = EXIT_ERROR
        return state

    config = state['config']
    try:
        if config.trace and state.get('trajectory') is not None:
            write_trace(state['game'], state['trajectory'], config.trace)
        elif config.trace:
            logger.warning(f"{config.command.value} produces no trajectory, trace {config.trace} not written")
        if config.report:
            game_spec = serialize_run_config(config)['game']
            if state['game'].tags.get('model'):
                game_spec = {**game_spec, "model": state['game'].tags['model']}
            report = build_report(config.command.value, game_spec, config.seed,
                                  state['result'], state['diagnostics'])
            write_report(report, config.report)
        state['exit_code'] = EXIT_OK if state['outcome_ok'] else EXIT_NEGATIVE
    except OSError as e:
        logger.error(f"Could not write outputs: {e}", exc_info=True)
        state['error'] = f"I/O error: {e}"
        state['exit_code'] = EXIT_ERROR
    return state


# --- Conditional Edge Logic ---

def should_continue(state: RunState) -> str:
    """Routes to the next node unless an error occurred or only validation was asked."""
    logger.info("--- Edge: should_continue ---")
    if state.get('error'):
        logger.warning(f"Routing to end due to error: {state['error']}")
        return "end"
    if state.get('validate_only') and state.get('validation') is not None:
        logger.info("Validation only, routing to end.")
        return "end"
    return "continue"
