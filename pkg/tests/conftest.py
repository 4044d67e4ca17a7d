import pytest

from game.core import Game, IntervalSpace
from game.library import GameKind, build_game, prisoners_dilemma
from solvers.response import BrSolverConfig
from solvers.stackelberg import LinearDuopolyParams, linear_duopoly_game

# Coarser than the default solver; enough for 1e-4 agreement on Cournot dynamics.
FAST_CFG = BrSolverConfig(grid_points=21, refine_rounds=7, refine_shrink=0.2)
# The same grids with the parabolic polish, for 1e-3 agreement on the duopoly SPNE grid.
PRECISE_CFG = BrSolverConfig(grid_points=21, refine_rounds=7, refine_shrink=0.2, parabolic_polish=True)

BUILT_IN_PARAMS = {
    GameKind.COURNOT_LINEAR: {"a": 10, "b": 1, "c1": 2, "c2": 2},
    GameKind.STACKELBERG_LINEAR: {"a": 10, "b": 1, "c1": 2, "c2": 2},
    GameKind.PRISONERS_DILEMMA: {},
    GameKind.MATRIX_GAME: {"row_payoffs": [[1, 0], [0, 1]], "col_payoffs": [[1, 0], [0, 1]]},
    GameKind.COORDINATION_GAME: {"n_actions": 3},
    GameKind.DEMAND_RESPONSE_TOY: {},
}


@pytest.fixture
def fast_cfg() -> BrSolverConfig:
    return FAST_CFG


@pytest.fixture
def precise_cfg() -> BrSolverConfig:
    return PRECISE_CFG


@pytest.fixture(params=list(GameKind), ids=lambda kind: kind.value)
def built_in_game(request) -> Game:
    return build_game(request.param, BUILT_IN_PARAMS[request.param])


@pytest.fixture
def rescale():
    """Returns a builder for the game with every utility mapped to alpha * u + beta."""
    def build(game: Game, alpha: float = 3.0, beta: float = 7.0) -> Game:
        return Game(game.spaces, lambda i, p: alpha * game.utility(i, p) + beta,
                    name=f"{game.name}_rescaled", tags=dict(game.tags))
    return build


@pytest.fixture
def symmetric_params() -> LinearDuopolyParams:
    return LinearDuopolyParams(a=10.0, b=1.0, c1=2.0, c2=2.0)


@pytest.fixture
def cournot(symmetric_params) -> Game:
    return linear_duopoly_game(symmetric_params, name="cournot")


@pytest.fixture
def pd() -> Game:
    return prisoners_dilemma()


@pytest.fixture
def product() -> Game:
    """u_i = a_i * a_j on [0, 1]^2; cross-partials are exactly 1."""
    def utility(i, profile):
        return profile[0] * profile[1]
    return Game((IntervalSpace(0.0, 1.0), IntervalSpace(0.0, 1.0)), utility, name="product")
