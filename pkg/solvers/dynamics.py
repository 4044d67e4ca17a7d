"""Scheduling rules and the iterated decision dynamics built on them."""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Set, Tuple

import numpy as np

from config import CYCLE_WINDOW, DEFAULT_FIX_TOL, DEFAULT_MAX_ITERS
from game.core import (
    Game,
    StrategyProfile,
    check_profile,
    evaluate_utilities,
    profile_distance,
    profiles_close,
    utility_of,
)
from solvers.response import (
    BrSolverConfig,
    DecisionRule,
    RuleKind,
    best_response_move,
    better_response,
)

logger = logging.getLogger(__name__)


class ScheduleKind(str, Enum):
    SYNCHRONOUS = "Synchronous"
    ROUND_ROBIN = "RoundRobin"
    RANDOM = "Random"
    ASYNCHRONOUS = "Asynchronous"


@dataclass(frozen=True)
class Schedule:
    kind: ScheduleKind = ScheduleKind.SYNCHRONOUS
    inclusion_prob: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, 'kind', ScheduleKind(self.kind))
        if not 0.0 < self.inclusion_prob <= 1.0:
            raise ValueError(f"inclusion_prob must lie in (0, 1], got {self.inclusion_prob}")

    @property
    def uses_rng(self) -> bool:
        return self.kind in (ScheduleKind.RANDOM, ScheduleKind.ASYNCHRONOUS)


class StopReason(str, Enum):
    FIXED_POINT = "FixedPoint"
    MAX_ITERATIONS = "MaxIterations"
    CYCLE = "Cycle"


@dataclass(frozen=True)
class StopCriteria:
    max_iters: int = DEFAULT_MAX_ITERS
    fix_tol: float = DEFAULT_FIX_TOL

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")
        if self.fix_tol < 0:
            raise ValueError(f"fix_tol must be >= 0, got {self.fix_tol}")


@dataclass(frozen=True)
class TrajectoryStep:
    iteration: int
    movers: Tuple[int, ...]
    profile: StrategyProfile
    utilities: Tuple[float, ...]


@dataclass
class Trajectory:
    steps: List[TrajectoryStep]
    stop_reason: StopReason

    @property
    def converged(self) -> bool:
        return self.stop_reason is StopReason.FIXED_POINT

    @property
    def final(self) -> StrategyProfile:
        return self.steps[-1].profile

    @property
    def iterations(self) -> int:
        return len(self.steps) - 1


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def select_movers(schedule: Schedule, n_players: int, t: int,
                  rng: np.random.Generator) -> Tuple[int, ...]:
    """Players who decide at step t (0-based), ascending."""
    if n_players < 1:
        raise ValueError("n_players must be >= 1")
    if schedule.kind is ScheduleKind.SYNCHRONOUS:
        return tuple(range(n_players))
    if schedule.kind is ScheduleKind.ROUND_ROBIN:
        return (t % n_players,)
    if schedule.kind is ScheduleKind.RANDOM:
        return (int(rng.integers(n_players)),)
    while True:
        included = rng.random(n_players) < schedule.inclusion_prob
        if included.any():
            return tuple(int(i) for i in np.flatnonzero(included))


def step(game: Game, profile: StrategyProfile, rule: DecisionRule, movers: Iterable[int],
         cfg: BrSolverConfig, rng: np.random.Generator) -> StrategyProfile:
    """One simultaneous move: every mover responds to the same incoming profile.

    A best-responding mover keeps its action unless the response strictly beats
    it from beyond the solver's resolution.
    """
    movers = sorted(set(movers))
    if not movers:
        raise ValueError("a step needs at least one mover")
    actions = list(profile.actions)
    for i in movers:
        if rule.kind is RuleKind.BEST_RESPONSE:
            actions[i] = best_response_move(game, i, profile, cfg)
        else:
            candidate = better_response(game, i, profile, rule.improvement_eps, rng, rule.max_draws)
            if candidate is not None:
                actions[i] = candidate
    return StrategyProfile(tuple(actions))


def run_dynamics(game: Game, init: StrategyProfile, rule: DecisionRule, schedule: Schedule,
                 cfg: BrSolverConfig, stop: StopCriteria, rng: np.random.Generator) -> Trajectory:
    """Iterates `step` until a fixed point, a revisited profile, or the iteration cap.

    A fixed point is a run of consecutive steps that each move no action by more
    than fix_tol and whose mover sets together cover every player.
    """
    check_profile(game, init)
    n = game.n_players
    profile = init
    steps = [TrajectoryStep(0, (), init, tuple(evaluate_utilities(game, init)))]
    history = deque([init], maxlen=CYCLE_WINDOW)
    quiet: Set[int] = set()
    reason = StopReason.MAX_ITERATIONS

    for t in range(1, stop.max_iters + 1):
        movers = select_movers(schedule, n, t - 1, rng)
        new_profile = step(game, profile, rule, movers, cfg, rng)
        utilities = tuple(utility_of(game, i, new_profile) for i in range(n))
        steps.append(TrajectoryStep(t, movers, new_profile, utilities))
        change = profile_distance(profile, new_profile)
        logger.debug(f"step {t}: movers={movers} change={change:.3e}")

        if change <= stop.fix_tol:
            quiet.update(movers)
            if len(quiet) == n:
                reason = StopReason.FIXED_POINT
                break
        else:
            quiet = set()
            if any(profiles_close(new_profile, seen) for seen in history):
                reason = StopReason.CYCLE
                break
        history.append(new_profile)
        profile = new_profile

    logger.info(f"{game.name}: dynamics stopped after {len(steps) - 1} steps ({reason.value})")
    return Trajectory(steps, reason)
