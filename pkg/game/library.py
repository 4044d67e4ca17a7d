"""Built-in games and the GameSpec -> Game factory used by the command line."""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from game.core import FiniteSpace, Game, IntervalSpace, StrategyProfile
from game.errors import InvalidSpec
from solvers.stackelberg import LinearDuopolyParams, linear_duopoly_game

logger = logging.getLogger(__name__)


class GameKind(str, Enum):
    COURNOT_LINEAR = "CournotLinear"
    STACKELBERG_LINEAR = "StackelbergLinear"
    PRISONERS_DILEMMA = "PrisonersDilemma"
    MATRIX_GAME = "MatrixGame"
    COORDINATION_GAME = "CoordinationGame"
    DEMAND_RESPONSE_TOY = "DemandResponseToy"


# --- Parameter models ---

class _Params(BaseModel):
    model_config = ConfigDict(extra='forbid')


class DuopolyParams(_Params):
    a: float
    b: float = Field(gt=0)
    c1: float = Field(ge=0)
    c2: float = Field(ge=0)
    upper: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode='after')
    def _positive_demand(self):
        if not self.a > 0:
            raise ValueError("a: demand intercept must be > 0")
        return self


class PrisonersDilemmaParams(_Params):
    pass


class MatrixParams(_Params):
    row_payoffs: List[List[float]]
    col_payoffs: List[List[float]]
    row_labels: Optional[List[str]] = None
    col_labels: Optional[List[str]] = None

    @model_validator(mode='after')
    def _consistent_shapes(self):
        rows = len(self.row_payoffs)
        if rows == 0 or any(len(r) == 0 for r in self.row_payoffs):
            raise ValueError("row_payoffs: matrix must be non-empty")
        cols = len(self.row_payoffs[0])
        for name, matrix in (("row_payoffs", self.row_payoffs), ("col_payoffs", self.col_payoffs)):
            if len(matrix) != rows or any(len(r) != cols for r in matrix):
                raise ValueError(f"{name}: expected a {rows}x{cols} matrix")
            if any(not math.isfinite(x) for r in matrix for x in r):
                raise ValueError(f"{name}: payoffs must be finite")
        if self.row_labels is not None and len(self.row_labels) != rows:
            raise ValueError(f"row_labels: expected {rows} labels")
        if self.col_labels is not None and len(self.col_labels) != cols:
            raise ValueError(f"col_labels: expected {cols} labels")
        return self


class CoordinationParams(_Params):
    n_actions: int = Field(default=2, ge=2)
    n_players: int = Field(default=2, ge=2)


class DemandResponseParams(_Params):
    v: float = Field(default=2.0, gt=0)
    kappa: float = Field(default=0.1, ge=0)
    pi_max: float = Field(default=2.0, gt=0)
    d_max: float = Field(default=5.0, gt=0)
    consumers: int = Field(default=3, ge=1)


# --- Builders ---

PD_LABELS = ("Cooperate", "Defect")
# (row, col) -> (row payoff, col payoff)
PD_PAYOFFS = {(0, 0): (3.0, 3.0), (0, 1): (0.0, 5.0), (1, 0): (5.0, 0.0), (1, 1): (1.0, 1.0)}


def _index_space(n: int, labels=None) -> FiniteSpace:
    return FiniteSpace(tuple((float(k),) for k in range(n)), tuple(labels) if labels else None)


def bimatrix_game(row_payoffs: List[List[float]], col_payoffs: List[List[float]],
                  row_labels=None, col_labels=None, name: str = "matrix_game") -> Game:
    """Two players; action k of either player is the 1-vector (k,)."""
    rows, cols = len(row_payoffs), len(row_payoffs[0])
    tables = ([list(map(float, r)) for r in row_payoffs], [list(map(float, r)) for r in col_payoffs])

    def utility(i: int, profile: StrategyProfile) -> float:
        return tables[i][int(profile[0][0])][int(profile[1][0])]

    return Game((_index_space(rows, row_labels), _index_space(cols, col_labels)), utility, name=name)


def prisoners_dilemma() -> Game:
    row = [[PD_PAYOFFS[(r, c)][0] for c in range(2)] for r in range(2)]
    col = [[PD_PAYOFFS[(r, c)][1] for c in range(2)] for r in range(2)]
    return bimatrix_game(row, col, PD_LABELS, PD_LABELS, name="prisoners_dilemma")


def coordination_game(n_actions: int = 2, n_players: int = 2) -> Game:
    """u_i = 1 when every player picks the same action, else 0."""
    def utility(i: int, profile: StrategyProfile) -> float:
        return 1.0 if all(a == profile[0] for a in profile) else 0.0

    return Game(tuple(_index_space(n_actions) for _ in range(n_players)), utility, name="coordination_game")


def demand_response_game(p: DemandResponseParams) -> Game:
    """Player 0 posts a price pi, players 1..K choose consumption d_k.

    Consumer k earns v log(1 + d_k) - pi d_k; the price setter earns
    pi D - kappa D^2 with D the total consumption. Illustrative model.
    """
    def utility(i: int, profile: StrategyProfile) -> float:
        price = profile[0]
        if i == 0:
            total = sum(profile.actions[1:])
            return price * total - p.kappa * total ** 2
        return p.v * math.log1p(profile[i]) - price * profile[i]

    spaces = (IntervalSpace(0.0, p.pi_max),) + tuple(IntervalSpace(0.0, p.d_max) for _ in range(p.consumers))
    return Game(spaces, utility, name="demand_response_toy", tags={"model": "illustrative"})


@dataclass(frozen=True)
class GameEntry:
    params: Type[_Params]
    build: Callable[[_Params], Game]
    description: str


def _duopoly(name: str) -> Callable[[DuopolyParams], Game]:
    def build(p: DuopolyParams) -> Game:
        params = LinearDuopolyParams(p.a, p.b, p.c1, p.c2)
        return linear_duopoly_game(params, p.upper, name=name)
    return build


GAME_LIBRARY: Dict[GameKind, GameEntry] = {
    GameKind.COURNOT_LINEAR: GameEntry(
        DuopolyParams, _duopoly("cournot_linear"),
        "Simultaneous quantity duopoly, p = a - b(q1 + q2), constant marginal costs"),
    GameKind.STACKELBERG_LINEAR: GameEntry(
        DuopolyParams, _duopoly("stackelberg_linear"),
        "Same duopoly with player 0 as leader and player 1 as follower"),
    GameKind.PRISONERS_DILEMMA: GameEntry(
        PrisonersDilemmaParams, lambda p: prisoners_dilemma(),
        "2x2 prisoner's dilemma with payoffs 3/0/5/1"),
    GameKind.MATRIX_GAME: GameEntry(
        MatrixParams,
        lambda p: bimatrix_game(p.row_payoffs, p.col_payoffs, p.row_labels, p.col_labels),
        "Two-player bimatrix game from explicit payoff tables"),
    GameKind.COORDINATION_GAME: GameEntry(
        CoordinationParams, lambda p: coordination_game(p.n_actions, p.n_players),
        "Everyone earns 1 when all actions match, else 0"),
    GameKind.DEMAND_RESPONSE_TOY: GameEntry(
        DemandResponseParams, demand_response_game,
        "Illustrative price setter vs. K consumers with log utility"),
}


def parse_params(kind: GameKind, params: dict) -> _Params:
    entry = GAME_LIBRARY[GameKind(kind)]
    try:
        return entry.params.model_validate(params or {})
    except ValidationError as e:
        messages = "; ".join(f"{'.'.join(str(x) for x in err['loc']) or 'params'}: {err['msg']}" for err in e.errors())
        raise InvalidSpec(f"{GameKind(kind).value}: {messages}") from e


def build_game(kind: GameKind, params: dict) -> Game:
    """Builds the Game for a validated kind/params pair; raises InvalidSpec."""
    kind = GameKind(kind)
    game = GAME_LIBRARY[kind].build(parse_params(kind, params))
    logger.info(f"Built {kind.value} game with {game.n_players} players")
    return game


def describe_games() -> List[str]:
    lines = []
    for kind, entry in GAME_LIBRARY.items():
        fields = []
        for name, info in entry.params.model_fields.items():
            fields.append(name if info.is_required() else f"{name}={info.default}")
        lines.append(f"{kind.value}: {entry.description} [{', '.join(fields) or 'no parameters'}]")
    return lines
