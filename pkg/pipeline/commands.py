"""One executor per RunConfig command; each returns a CommandOutcome."""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from game.core import (
    FiniteSpace,
    Game,
    StrategyProfile,
    default_profile,
    evaluate_utilities,
    make_profile,
)
from game.errors import ConfigError, InvalidGame
from pipeline.run_config import DUOPOLY_KINDS, Command, RunConfig
from pipeline.serialization import action_to_json, profile_to_json
from solvers.dynamics import Trajectory, make_rng, run_dynamics
from solvers.equilibrium import (
    NashVerdict,
    enumerate_pure_nash_finite,
    grid_nash_candidates,
    is_epsilon_nash,
)
from solvers.stackelberg import (
    LinearDuopolyParams,
    SpneSolution,
    first_mover_advantage,
    follower_br_analytic,
    follower_quantity_analytic,
    solve_spne_analytic,
    solve_spne_numeric,
)
from solvers.supermodular import SupermodularReport, diagnose_supermodularity

logger = logging.getLogger(__name__)


@dataclass
class CommandOutcome:
    result: Dict[str, Any]
    diagnostics: Dict[str, Any]
    ok: bool
    summary: str
    trajectory: Optional[Trajectory] = None


def parse_action(space, value):
    """JSON action: a label or "#k" for finite spaces, a number or a list otherwise."""
    if isinstance(space, FiniteSpace) and isinstance(value, str):
        if value.startswith("#") and value[1:].isdigit() and int(value[1:]) < space.size:
            return space.actions[int(value[1:])]
        if space.labels and value in space.labels:
            return space.actions[space.labels.index(value)]
        raise ConfigError(f"unknown action label {value!r}")
    return value


def parse_profile(game: Game, values: Optional[List[Any]]) -> StrategyProfile:
    if values is None:
        return default_profile(game)
    if len(values) != game.n_players:
        raise ConfigError(f"profile has {len(values)} entries, game has {game.n_players} players")
    return make_profile(game, [parse_action(s, v) for s, v in zip(game.spaces, values)])


def verdict_to_json(game: Game, verdict: NashVerdict) -> Dict[str, Any]:
    deviation = None
    if verdict.worst_deviation is not None:
        action, gain = verdict.worst_deviation
        deviation = {"action": action_to_json(game.spaces[verdict.worst_player], action), "gain": gain}
    return {
        "is_nash": verdict.is_nash,
        "eps": verdict.eps,
        "worst_player": verdict.worst_player,
        "worst_deviation": deviation,
        "gains": list(verdict.gains),
    }


# --- Commands ---

def run_dynamics_command(config: RunConfig, game: Game) -> CommandOutcome:
    cfg = config.solver.build()
    init = parse_profile(game, config.init)
    trajectory = run_dynamics(game, init, config.rule.build(), config.schedule.build(), cfg,
                              config.stop.build(), make_rng(config.seed))
    final = trajectory.final
    verdict = is_epsilon_nash(game, final, config.eps, cfg)
    result = {
        "converged": trajectory.converged,
        "stop_reason": trajectory.stop_reason.value,
        "iterations": trajectory.iterations,
        "initial_profile": profile_to_json(game, init),
        "final_profile": profile_to_json(game, final),
        "final_utilities": list(trajectory.steps[-1].utilities),
    }
    summary = (f"Dynamics: {trajectory.stop_reason.value} after {trajectory.iterations} steps, "
               f"final profile {profile_to_json(game, final)}")
    return CommandOutcome(result, {"nash_check": verdict_to_json(game, verdict)},
                          trajectory.converged, summary, trajectory)


def run_nash_check_command(config: RunConfig, game: Game) -> CommandOutcome:
    profile = parse_profile(game, config.profile)
    verdict = is_epsilon_nash(game, profile, config.eps, config.solver.build())
    result = {
        "profile": profile_to_json(game, profile),
        "utilities": evaluate_utilities(game, profile),
        **verdict_to_json(game, verdict),
    }
    summary = f"NashCheck: is_nash={verdict.is_nash} (worst gain {verdict.worst_gain:.6g}, eps {config.eps})"
    return CommandOutcome(result, {}, verdict.is_nash, summary)


def run_enumerate_command(config: RunConfig, game: Game) -> CommandOutcome:
    if game.all_finite:
        method = "exhaustive"
        equilibria = enumerate_pure_nash_finite(game, config.eps)
    elif game.all_interval:
        method = "grid"
        equilibria = grid_nash_candidates(game, config.resolution, config.eps, config.solver.build())
    else:
        raise InvalidGame(f"{game.name}: enumeration needs all-finite or all-interval spaces")
    result = {
        "method": method,
        "eps": config.eps,
        "equilibria": [profile_to_json(game, p) for p in equilibria],
        "utilities": [evaluate_utilities(game, p) for p in equilibria],
        "count": len(equilibria),
    }
    diagnostics = {"resolution": config.resolution} if method == "grid" else {}
    summary = f"EnumerateNash: {len(equilibria)} pure equilibria ({method})"
    return CommandOutcome(result, diagnostics, len(equilibria) > 0, summary)


def supermodular_report_to_json(game: Game, report: SupermodularReport) -> Dict[str, Any]:
    lattice = report.lattice
    br = report.br
    return {
        "verdict": report.verdict.value,
        "reasons": list(report.reasons),
        "lattice_ok": lattice.ok,
        "lattice_note": lattice.note,
        "lattice_witness": [list(v) for v in lattice.witness] if lattice.witness else None,
        "supermodular_utilities": [
            {"player": c.player, "ok": c.ok, "exhaustive": c.exhaustive, "tested": c.tested,
             "excess": c.excess,
             "counterexample": [profile_to_json(game, p) for p in c.counterexample] if c.counterexample else None}
            for c in report.utilities
        ],
        "cross_partials": [
            {"players": list(r.players), "min_cross_partial": r.min_value, "ok": r.ok,
             "witness": profile_to_json(game, r.witness), "samples": r.samples,
             "resampled": r.resampled, "steps": list(r.steps)}
            for r in report.cross_partials
        ],
        "br_properties": None if br is None else {
            "uniqueness_ok": br.uniqueness_ok,
            "positivity_ok": br.positivity_ok,
            "scalability_ok": br.scalability_ok,
            "alphas": list(br.alphas),
            "players": [
                {"player": p.player, "resolution": p.resolution, "samples": p.samples,
                 "uniqueness_ok": p.uniqueness_ok,
                 "uniqueness_witness": profile_to_json(game, p.uniqueness_witness),
                 "positivity_ok": p.positivity_ok,
                 "positivity_witness": profile_to_json(game, p.positivity_witness),
                 "scalability_ok": p.scalability_ok,
                 "scalability_witness": None if p.scalability_witness is None else {
                     "profile": profile_to_json(game, p.scalability_witness[0]),
                     "alpha": p.scalability_witness[1]}}
                for p in br.players
            ],
        },
        "quasi_concavity": [
            {"player": q.player, "ok": q.ok, "samples": q.samples, "witness": profile_to_json(game, q.witness)}
            for q in report.quasi_concavity
        ],
    }


def run_supermodular_command(config: RunConfig, game: Game) -> CommandOutcome:
    d = config.diagnostics
    report = diagnose_supermodularity(game, make_rng(config.seed), d.pairs, d.points, d.profiles,
                                      d.alphas, config.solver.build())
    result = supermodular_report_to_json(game, report)
    return CommandOutcome(result, {}, True, f"Supermodular: {report.verdict.value}")


def solution_to_json(game: Game, solution: SpneSolution) -> Dict[str, Any]:
    return {
        "method": solution.method.value,
        "q1_star": action_to_json(game.spaces[0], solution.q1_star),
        "q2_star": action_to_json(game.spaces[1], solution.q2_star),
        "leader_utility": solution.leader_utility,
        "follower_utility": solution.follower_utility,
        "interior": solution.interior,
        "foc_residual": solution.foc_residual,
    }


def run_spne_command(config: RunConfig, game: Game) -> CommandOutcome:
    cfg = config.solver.build()
    numeric = solve_spne_numeric(game, cfg)
    result: Dict[str, Any] = {"numeric": solution_to_json(game, numeric)}
    diagnostics: Dict[str, Any] = {}
    summary = f"Spne: q1*={result['numeric']['q1_star']}, q2*={result['numeric']['q2_star']} (numeric)"

    if config.game.kind in DUOPOLY_KINDS:
        p = config.game.params
        params = LinearDuopolyParams(p["a"], p["b"], p["c1"], p["c2"])
        analytic = solve_spne_analytic(params)
        result["analytic"] = solution_to_json(game, analytic)
        result["max_abs_difference"] = max(abs(analytic.q1_star - numeric.q1_star),
                                           abs(analytic.q2_star - numeric.q2_star))
        diagnostics["follower_closed_form_gap"] = abs(
            follower_br_analytic(params, analytic.q1_star) - follower_quantity_analytic(params))
        diagnostics["price"] = params.price(analytic.q1_star, analytic.q2_star)
        summary = (f"Spne: q1*={analytic.q1_star:.6g}, q2*={analytic.q2_star:.6g} (analytic); "
                   f"numeric gap {result['max_abs_difference']:.3g}")

    if game.all_interval:
        simultaneous = grid_nash_candidates(game, config.resolution, config.eps, cfg)
        if simultaneous:
            comparison = first_mover_advantage(game, numeric, simultaneous[0])
            diagnostics["first_mover"] = {
                "simultaneous_profile": profile_to_json(game, simultaneous[0]),
                "leader_utility_simultaneous": comparison.leader_utility_simultaneous,
                "leader_utility_stackelberg": comparison.leader_utility_stackelberg,
                "advantage": comparison.advantage,
            }
    return CommandOutcome(result, diagnostics, True, summary)


COMMANDS = {
    Command.DYNAMICS: run_dynamics_command,
    Command.NASH_CHECK: run_nash_check_command,
    Command.ENUMERATE_NASH: run_enumerate_command,
    Command.SUPERMODULAR: run_supermodular_command,
    Command.SPNE: run_spne_command,
}


def execute(config: RunConfig, game: Game) -> CommandOutcome:
    logger.info(f"Executing {config.command.value} on {game.name}")
    return COMMANDS[config.command](config, game)
