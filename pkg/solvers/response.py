"""Decision rules: best response and better response for a single player.

Continuous best responses are located by a uniform grid followed by shrinking
re-grids around the incumbent, then an optional three-point parabolic polish.
Ties always go to the lowest list index / lowest grid coordinate.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from config import (
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_DRAWS,
    DEFAULT_PARABOLIC_POLISH,
    DEFAULT_REFINE_ROUNDS,
    DEFAULT_REFINE_SHRINK,
)
from game.core import Action, FiniteSpace, Game, IntervalSpace, StrategyProfile, utility_of

logger = logging.getLogger(__name__)


class RuleKind(str, Enum):
    BEST_RESPONSE = "BestResponse"
    BETTER_RESPONSE = "BetterResponse"


@dataclass(frozen=True)
class DecisionRule:
    kind: RuleKind = RuleKind.BEST_RESPONSE
    improvement_eps: float = 1e-6
    max_draws: int = DEFAULT_MAX_DRAWS

    def __post_init__(self):
        object.__setattr__(self, 'kind', RuleKind(self.kind))
        if self.kind is RuleKind.BETTER_RESPONSE and not self.improvement_eps > 0:
            raise ValueError(f"improvement_eps must be > 0, got {self.improvement_eps}")
        if self.max_draws < 1:
            raise ValueError(f"max_draws must be positive, got {self.max_draws}")

    @classmethod
    def best(cls) -> "DecisionRule":
        return cls(RuleKind.BEST_RESPONSE)

    @classmethod
    def better(cls, improvement_eps: float, max_draws: int = DEFAULT_MAX_DRAWS) -> "DecisionRule":
        return cls(RuleKind.BETTER_RESPONSE, improvement_eps, max_draws)


@dataclass(frozen=True)
class BrSolverConfig:
    grid_points: int = DEFAULT_GRID_POINTS
    refine_rounds: int = DEFAULT_REFINE_ROUNDS
    refine_shrink: float = DEFAULT_REFINE_SHRINK
    parabolic_polish: bool = DEFAULT_PARABOLIC_POLISH

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError(f"grid_points must be >= 3, got {self.grid_points}")
        if self.refine_rounds < 0:
            raise ValueError(f"refine_rounds must be >= 0, got {self.refine_rounds}")
        if not 0.0 < self.refine_shrink < 1.0:
            raise ValueError(f"refine_shrink must lie in (0, 1), got {self.refine_shrink}")

    @property
    def final_spacing_fraction(self) -> float:
        """Spacing of the last re-grid as a fraction of the full interval width."""
        return self.refine_shrink ** self.refine_rounds / (self.grid_points - 1)

    def resolution(self, space: IntervalSpace) -> float:
        """Distance below which two best responses on `space` cannot be told apart.

        Without the polish every answer sits on the last re-grid, so two
        neighbouring grid points are equally good answers.
        """
        if self.parabolic_polish:
            return 0.0
        return self.final_spacing_fraction * space.width


# --- Scalar argmax ---

def _parabola_vertex(x: float, h: float, f_minus: float, f_mid: float, f_plus: float) -> Optional[float]:
    curvature = f_minus - 2.0 * f_mid + f_plus
    if not curvature < 0.0:
        return None
    offset = 0.5 * h * (f_minus - f_plus) / curvature
    return x + min(max(offset, -h), h)


def grid_argmax(f: Callable[[float], float], lo: float, hi: float,
                cfg: BrSolverConfig) -> Tuple[float, float]:
    """Maximizes a scalar function on [lo, hi]; returns (argmax, max).

    The returned value is >= f at every point evaluated.
    """
    grid = np.linspace(lo, hi, cfg.grid_points)
    values = [f(float(x)) for x in grid]
    k = int(np.argmax(values))
    best_x, best_v = float(grid[k]), values[k]
    spacing = (hi - lo) / (cfg.grid_points - 1)

    width = hi - lo
    for _ in range(cfg.refine_rounds):
        width *= cfg.refine_shrink
        a, b = max(lo, best_x - width / 2), min(hi, best_x + width / 2)
        if not b > a:
            break
        grid = np.linspace(a, b, cfg.grid_points)
        values = [f(float(x)) for x in grid]
        k = int(np.argmax(values))
        spacing = (b - a) / (cfg.grid_points - 1)
        if values[k] > best_v:
            best_x, best_v = float(grid[k]), values[k]

    if cfg.parabolic_polish and lo <= best_x - spacing and best_x + spacing <= hi and spacing > 0:
        vertex = _parabola_vertex(best_x, spacing, f(best_x - spacing), best_v, f(best_x + spacing))
        if vertex is not None:
            v = f(vertex)
            if v > best_v:
                best_x, best_v = vertex, v
    return best_x, best_v


# --- Decision rules ---

def best_response_with_value(game: Game, i: int, profile: StrategyProfile,
                             cfg: BrSolverConfig) -> Tuple[Action, float]:
    space = game.spaces[i]
    if isinstance(space, FiniteSpace):
        values = [utility_of(game, i, profile.replace(i, a)) for a in space.actions]
        k = int(np.argmax(values))
        return space.actions[k], values[k]
    return grid_argmax(lambda x: utility_of(game, i, profile.replace(i, x)), space.lo, space.hi, cfg)


def best_response(game: Game, i: int, profile: StrategyProfile, cfg: BrSolverConfig) -> Action:
    """Player i's utility-maximizing action against the rest of `profile`."""
    return best_response_with_value(game, i, profile, cfg)[0]


def best_response_move(game: Game, i: int, profile: StrategyProfile, cfg: BrSolverConfig) -> Action:
    """Player i's action after a best-response turn.

    The incumbent is kept unless the response strictly beats it and, on an
    interval, lies more than one solver resolution away.
    """
    current = profile[i]
    candidate, value = best_response_with_value(game, i, profile, cfg)
    if not value > utility_of(game, i, profile):
        return current
    space = game.spaces[i]
    if isinstance(space, IntervalSpace) and abs(candidate - current) <= cfg.resolution(space):
        return current
    return candidate


def draw_action(game: Game, i: int, rng: np.random.Generator) -> Action:
    space = game.spaces[i]
    if isinstance(space, FiniteSpace):
        return space.actions[int(rng.integers(space.size))]
    return float(rng.uniform(space.lo, space.hi))


def better_response(game: Game, i: int, profile: StrategyProfile, eps: float,
                    rng: np.random.Generator, max_draws: int) -> Optional[Action]:
    """First uniformly drawn action improving u_i by more than eps, or None."""
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    current = utility_of(game, i, profile)
    for _ in range(max_draws):
        candidate = draw_action(game, i, rng)
        if utility_of(game, i, profile.replace(i, candidate)) - current > eps:
            return candidate
    logger.debug(f"player {i}: no improving draw in {max_draws} tries")
    return None
