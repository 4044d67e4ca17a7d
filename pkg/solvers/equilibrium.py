"""Nash verification and brute-force pure equilibrium enumeration.

Every check is an explicit epsilon-relaxation: continuous best responses are
grid based, so a profile is only ever certified up to a stated utility gain.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import ACTION_TOL, ENUMERATION_CAP, POLISH_ITERS
from game.core import (
    Action,
    FiniteSpace,
    Game,
    StrategyProfile,
    check_profile,
    profile_distance,
    utility_of,
)
from game.errors import InvalidGame, NotFiniteGame, ProductTooLarge
from solvers.response import BrSolverConfig, best_response_move, best_response_with_value

logger = logging.getLogger(__name__)


@dataclass
class NashVerdict:
    is_nash: bool
    eps: float
    worst_player: Optional[int] = None
    worst_deviation: Optional[Tuple[Action, float]] = None
    gains: List[float] = field(default_factory=list)

    @property
    def worst_gain(self) -> float:
        return self.worst_deviation[1] if self.worst_deviation else 0.0


def is_epsilon_nash(game: Game, profile: StrategyProfile, eps: float,
                    cfg: BrSolverConfig = BrSolverConfig()) -> NashVerdict:
    """Checks u_i(s*) >= u_i(s_i, s*_-i) - eps for every player i."""
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    check_profile(game, profile)
    gains = []
    worst_player, worst_deviation = None, None
    for i in range(game.n_players):
        action, value = best_response_with_value(game, i, profile, cfg)
        # Staying put is always a candidate, so the best gain is never negative.
        gain = max(0.0, value - utility_of(game, i, profile))
        gains.append(gain)
        if worst_deviation is None or gain > worst_deviation[1]:
            worst_player, worst_deviation = i, (action, gain)
    verdict = NashVerdict(worst_deviation[1] <= eps, eps, worst_player, worst_deviation, gains)
    logger.debug(f"{game.name}: nash check at {profile.actions} -> {verdict.is_nash} (worst gain {verdict.worst_gain:.3e})")
    return verdict


# --- Exhaustive enumeration ---

def _check_product(sizes: List[int], cap: int) -> None:
    total = math.prod(sizes)
    if total > cap:
        raise ProductTooLarge(f"joint space has {total} profiles, cap is {cap}")


def payoff_tensor(game: Game, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """U[k_0, ..., k_{N-1}, i] = u_i at the profile of action indices k."""
    if not game.all_finite:
        raise NotFiniteGame(f"{game.name}: every action space must be finite")
    sizes = [s.size for s in game.spaces]
    _check_product(sizes, cap)
    tensor = np.empty(sizes + [game.n_players])
    flat = tensor.reshape(-1, game.n_players)
    for row, indices in enumerate(itertools.product(*(range(n) for n in sizes))):
        profile = StrategyProfile(tuple(s.actions[k] for s, k in zip(game.spaces, indices)))
        flat[row] = [utility_of(game, i, profile) for i in range(game.n_players)]
    return tensor


def enumerate_pure_nash_finite(game: Game, eps: float = 0.0,
                               cap: int = ENUMERATION_CAP) -> List[StrategyProfile]:
    """All pure eps-equilibria of a finite game, in lexicographic index order."""
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    tensor = payoff_tensor(game, cap)
    stable = np.ones(tensor.shape[:-1], dtype=bool)
    for i in range(game.n_players):
        u = tensor[..., i]
        stable &= (u.max(axis=i, keepdims=True) - u) <= eps
    equilibria = [
        StrategyProfile(tuple(s.actions[k] for s, k in zip(game.spaces, indices)))
        for indices in np.argwhere(stable)
    ]
    logger.info(f"{game.name}: {len(equilibria)} pure equilibria at eps={eps}")
    return equilibria


# --- Grid oracle for continuous games ---

def discretize(game: Game, resolution: int) -> Game:
    """The finite game on `resolution` evenly spaced points of each interval."""
    if not game.all_interval:
        raise InvalidGame(f"{game.name}: discretization needs interval spaces")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    spaces = tuple(
        FiniteSpace(tuple((float(x),) for x in np.linspace(s.lo, s.hi, resolution)))
        for s in game.spaces
    )

    def utility(i: int, profile: StrategyProfile) -> float:
        return game.utility(i, StrategyProfile(tuple(a[0] for a in profile)))

    return Game(spaces, utility, name=f"{game.name}@grid{resolution}")


def polish_candidate(game: Game, candidate: StrategyProfile,
                     cfg: BrSolverConfig) -> Tuple[StrategyProfile, float]:
    """Refines a grid candidate by synchronous best responses; returns (profile, worst gain)."""
    gain = is_epsilon_nash(game, candidate, 0.0, cfg).worst_gain
    if gain == 0.0:
        return candidate, gain
    profile = candidate
    for _ in range(POLISH_ITERS):
        moved = StrategyProfile(tuple(
            best_response_move(game, i, profile, cfg) for i in range(game.n_players)))
        done = profile_distance(profile, moved) <= ACTION_TOL
        profile = moved
        if done:
            break
    polished_gain = is_epsilon_nash(game, profile, 0.0, cfg).worst_gain
    if polished_gain <= gain:
        return profile, polished_gain
    return candidate, gain


def grid_nash_candidates(game: Game, resolution: int, eps: float,
                         cfg: BrSolverConfig = BrSolverConfig(),
                         cap: int = ENUMERATION_CAP) -> List[StrategyProfile]:
    """Grid eps-equilibria polished by best response and merged into clusters."""
    if not game.all_interval:
        raise InvalidGame(f"{game.name}: grid candidates need interval spaces")
    _check_product([resolution] * game.n_players, cap)
    raw = enumerate_pure_nash_finite(discretize(game, resolution), eps, cap)
    polished = [
        polish_candidate(game, StrategyProfile(tuple(a[0] for a in p)), cfg) for p in raw
    ]
    polished.sort(key=lambda pg: pg[1])

    # polished points closer than the solver can resolve are one equilibrium
    merge_tol = max(10 * ACTION_TOL, 2 * max(cfg.resolution(s) for s in game.spaces))
    clusters: List[StrategyProfile] = []
    for profile, _ in polished:
        if not any(profile_distance(profile, kept) <= merge_tol for kept in clusters):
            clusters.append(profile)
    clusters.sort(key=lambda p: p.actions)
    logger.info(f"{game.name}: {len(raw)} grid candidates merged into {len(clusters)} clusters")
    return clusters
