import argparse
import logging
import sys
from typing import List, Optional

from config import DEFAULT_LOG_LEVEL, LOG_FORMAT

logger = logging.getLogger("GamesCLI")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="games", description="Game-theoretic solvers driven by JSON run configs.")
    parser.add_argument("--log-level", default=logging.getLevelName(DEFAULT_LOG_LEVEL),
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="action", required=True)

    run = sub.add_parser("run", help="execute the command named in a RunConfig")
    run.add_argument("--config", required=True)
    run.add_argument("--trace", help="trace CSV path, overrides the config")
    run.add_argument("--report", help="report JSON path, overrides the config")
    run.add_argument("--seed", type=int, help="overrides the config seed")

    validate = sub.add_parser("validate", help="check a RunConfig and its game without running it")
    validate.add_argument("--config", required=True)

    sub.add_parser("list-games", help="list the built-in games and their parameters")
    return parser


def list_games() -> int:
    from game.library import describe_games
    for line in describe_games():
        print(line)
    return 0


def run_pipeline(config_path: str, overrides: dict, validate_only: bool) -> int:
    # Imported late so `list-games` does not compile the graph.
    from pipeline.graph import run_app
    from pipeline.state import initial_state

    logger.info(f"Invoking run graph for {config_path}...")
    final_state = run_app.invoke(initial_state(config_path, overrides, validate_only))
    logger.info("Run graph invocation complete.")

    if final_state.get('error'):
        print(f"error: {final_state['error']}", file=sys.stderr)
        return 1
    if validate_only and final_state.get('validation') is not None:
        for p in final_state['validation'].players:
            issues = "; ".join(p.issues) or "ok"
            print(f"player {p.player} ({p.kind}): non_empty={p.non_empty} compact={p.compact} "
                  f"convex={p.convex} [{issues}]")
    print(final_state['summary'])
    return final_state['exit_code']


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        if args.action == "list-games":
            return list_games()
        if args.action == "validate":
            return run_pipeline(args.config, {}, validate_only=True)
        overrides = {"seed": args.seed, "trace": args.trace, "report": args.report}
        return run_pipeline(args.config, overrides, validate_only=False)
    except Exception as e:
        logger.critical(f"An unexpected error occurred: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
