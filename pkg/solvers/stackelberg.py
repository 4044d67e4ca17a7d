"""Leader-follower (Stackelberg) games solved by backward induction.

Player 0 is the leader and commits first; player 1 is the follower and best
responds to the committed action. The linear duopoly with inverse demand
p = a - b(q1 + q2) and constant marginal costs has closed forms; any other
two-player game goes through the numeric bilevel solver.
"""
import logging
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from config import FD_STEP_FRACTION
from game.core import (
    FiniteSpace,
    Game,
    IntervalSpace,
    StrategyProfile,
    canonical_action,
    utility_of,
)
from game.errors import InvalidGame, InvalidSpec, NonInteriorSolution
from solvers.response import BrSolverConfig, best_response, grid_argmax

logger = logging.getLogger(__name__)

LEADER, FOLLOWER = 0, 1


@dataclass(frozen=True)
class LinearDuopolyParams:
    """Inverse demand p = a - b(q1 + q2); leader cost c1*q1, follower cost c2*q2."""
    a: float
    b: float
    c1: float
    c2: float

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidSpec(f"b: demand slope must be > 0, got {self.b}")
        if self.c1 < 0 or self.c2 < 0:
            raise InvalidSpec(f"c1/c2: marginal costs must be >= 0, got {self.c1}, {self.c2}")

    @property
    def interior(self) -> bool:
        """Both closed-form quantities are strictly positive."""
        return (self.a > self.c2
                and self.a + self.c2 - 2 * self.c1 > 0
                and self.a - 3 * self.c2 + 2 * self.c1 > 0)

    @property
    def demand_zero_quantity(self) -> float:
        return self.a / self.b

    def price(self, q1: float, q2: float) -> float:
        # Not clamped at zero, matching the closed forms.
        return self.a - self.b * (q1 + q2)

    def profit(self, i: int, q1: float, q2: float) -> float:
        q, c = (q1, self.c1) if i == LEADER else (q2, self.c2)
        return self.price(q1, q2) * q - c * q


def linear_duopoly_game(p: LinearDuopolyParams, upper: Optional[float] = None,
                        name: str = "linear_duopoly") -> Game:
    """Both players choose q in [0, upper]; upper defaults to the demand-zero quantity a/b."""
    upper = p.demand_zero_quantity if upper is None else upper

    def utility(i: int, profile: StrategyProfile) -> float:
        return p.profit(i, profile[0], profile[1])

    space = IntervalSpace(0.0, upper)
    return Game((space, space), utility, name=name,
                tags={"a": p.a, "b": p.b, "c1": p.c1, "c2": p.c2})


class SolveMethod(str, Enum):
    ANALYTIC = "Analytic"
    NUMERIC_BILEVEL = "NumericBilevel"


@dataclass
class SpneSolution:
    q1_star: float
    q2_star: float
    leader_utility: float
    follower_utility: float
    method: SolveMethod
    interior: bool = True
    foc_residual: Optional[float] = None


# --- Closed forms ---

def follower_br_analytic(p: LinearDuopolyParams, q1: float) -> float:
    """q2(q1) = (a - b q1 - c2) / (2b), clamped at zero."""
    return max(0.0, (p.a - p.b * q1 - p.c2) / (2 * p.b))


def leader_quantity_analytic(p: LinearDuopolyParams) -> float:
    """q1* = (a + c2 - 2 c1) / (2b)."""
    return (p.a + p.c2 - 2 * p.c1) / (2 * p.b)


def follower_quantity_analytic(p: LinearDuopolyParams) -> float:
    """q2* = (a - 3 c2 + 2 c1) / (4b); equals follower_br_analytic(p, q1*) when interior."""
    return (p.a - 3 * p.c2 + 2 * p.c1) / (4 * p.b)


def leader_quantity_constrained(p: LinearDuopolyParams) -> float:
    """The leader's optimum once both quantities must stay non-negative.

    Below q_bar = (a - c2)/b the follower produces and the leader's reduced profit
    is maximized at the interior formula; from q_bar on the follower is shut out
    and the leader faces the monopoly problem. Ties go to the smaller quantity.
    """
    q_bar = (p.a - p.c2) / p.b
    upper = p.demand_zero_quantity
    candidates = []
    if q_bar > 0:
        candidates.append(min(max(leader_quantity_analytic(p), 0.0), q_bar))
    monopoly = (p.a - p.c1) / (2 * p.b)
    candidates.append(min(max(monopoly, max(q_bar, 0.0)), upper))

    def leader_profit(q1: float) -> float:
        return p.profit(LEADER, q1, follower_br_analytic(p, q1))

    return max(sorted(candidates), key=leader_profit)


def solve_spne_analytic(p: LinearDuopolyParams) -> SpneSolution:
    if p.interior:
        q1, q2 = leader_quantity_analytic(p), follower_quantity_analytic(p)
    else:
        q1 = leader_quantity_constrained(p)
        q2 = follower_br_analytic(p, q1)
        logger.warning(f"{p}: closed form is not interior, reporting the constrained optimum ({q1}, {q2})")
        warnings.warn(f"non-interior Stackelberg solution for {p}", NonInteriorSolution)
    # d(Pi_2)/d(q2) = a - b q1 - 2 b q2 - c2, meaningless once the follower sits at zero
    residual = abs(p.a - p.b * q1 - 2 * p.b * q2 - p.c2) if q2 > 0 else None
    return SpneSolution(q1, q2, p.profit(LEADER, q1, q2), p.profit(FOLLOWER, q1, q2),
                        SolveMethod.ANALYTIC, p.interior, residual)


# --- Numeric bilevel ---

def require_two_player(g: Game) -> None:
    if g.n_players != 2:
        raise InvalidGame(f"{g.name}: a leader-follower game needs exactly 2 players, got {g.n_players}")


def _follower_anchor(g: Game):
    space = g.spaces[FOLLOWER]
    return space.actions[0] if isinstance(space, FiniteSpace) else space.lo


def follower_br_numeric(g: Game, q1, cfg: BrSolverConfig = BrSolverConfig()):
    """The follower's best response once the leader has committed to q1."""
    require_two_player(g)
    q1 = canonical_action(g.spaces[LEADER], q1, LEADER)
    return best_response(g, FOLLOWER, StrategyProfile((q1, _follower_anchor(g))), cfg)


def follower_foc_residual(g: Game, profile: StrategyProfile) -> Optional[float]:
    """|d u_follower / d q2| by central difference, or None at a boundary or finite space."""
    space = g.spaces[FOLLOWER]
    if not isinstance(space, IntervalSpace):
        return None
    h = FD_STEP_FRACTION * space.width
    q2 = profile[FOLLOWER]
    if not (space.lo + h <= q2 <= space.hi - h):
        return None
    up = utility_of(g, FOLLOWER, profile.replace(FOLLOWER, q2 + h))
    down = utility_of(g, FOLLOWER, profile.replace(FOLLOWER, q2 - h))
    return abs(up - down) / (2 * h)


def solve_spne_numeric(g: Game, cfg: BrSolverConfig = BrSolverConfig()) -> SpneSolution:
    """Backward induction: the leader maximizes u_0(q1, BR_1(q1)) over its own space.

    The leader's action is fixed before the follower's response is read back;
    nothing is re-optimized after q2 is known.
    """
    require_two_player(g)

    def leader_value(q1) -> float:
        q2 = follower_br_numeric(g, q1, cfg)
        return utility_of(g, LEADER, StrategyProfile((q1, q2)))

    leader_space = g.spaces[LEADER]
    if isinstance(leader_space, FiniteSpace):
        values = [leader_value(a) for a in leader_space.actions]
        q1 = leader_space.actions[int(np.argmax(values))]
    else:
        q1, _ = grid_argmax(leader_value, leader_space.lo, leader_space.hi, cfg)

    q2 = follower_br_numeric(g, q1, cfg)
    profile = StrategyProfile((q1, q2))
    residual = follower_foc_residual(g, profile)
    solution = SpneSolution(q1, q2, utility_of(g, LEADER, profile), utility_of(g, FOLLOWER, profile),
                            SolveMethod.NUMERIC_BILEVEL, interior=residual is not None,
                            foc_residual=residual)
    logger.info(f"{g.name}: numeric SPNE q1*={q1}, q2*={q2}")
    return solution


@dataclass
class FirstMoverComparison:
    leader_utility_stackelberg: float
    leader_utility_simultaneous: float

    @property
    def advantage(self) -> float:
        return self.leader_utility_stackelberg - self.leader_utility_simultaneous


def first_mover_advantage(g: Game, solution: SpneSolution,
                          simultaneous: StrategyProfile) -> FirstMoverComparison:
    """Leader's SPNE utility against its utility at a simultaneous-move equilibrium."""
    return FirstMoverComparison(solution.leader_utility, utility_of(g, LEADER, simultaneous))
