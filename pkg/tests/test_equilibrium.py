import itertools

import numpy as np
import pytest

from game.core import FiniteSpace, Game, IntervalSpace, StrategyProfile
from game.errors import NotFiniteGame, ProductTooLarge
from game.library import bimatrix_game, coordination_game
from solvers.equilibrium import (
    enumerate_pure_nash_finite,
    grid_nash_candidates,
    is_epsilon_nash,
    payoff_tensor,
)
from solvers.response import BrSolverConfig
from solvers.stackelberg import LinearDuopolyParams, linear_duopoly_game

CFG = BrSolverConfig()


def all_profiles(game):
    return [StrategyProfile(p) for p in itertools.product(*(s.actions for s in game.spaces))]


def test_prisoners_dilemma_has_only_defect_defect(pd):
    defect = pd.spaces[0].actions[1]
    assert enumerate_pure_nash_finite(pd) == [StrategyProfile((defect, defect))]


def test_cooperation_is_not_nash(pd):
    cooperate, defect = pd.spaces[0].actions
    verdict = is_epsilon_nash(pd, StrategyProfile((cooperate, cooperate)), 0.0, CFG)
    assert not verdict.is_nash
    assert verdict.worst_player == 0
    assert verdict.worst_deviation == (defect, 2.0)
    assert verdict.gains == [2.0, 2.0]


def test_cournot_nash_check(cournot):
    assert is_epsilon_nash(cournot, StrategyProfile((8 / 3, 8 / 3)), 1e-9, CFG).is_nash
    verdict = is_epsilon_nash(cournot, StrategyProfile((4.0, 2.0)), 1e-6, CFG)
    assert not verdict.is_nash
    assert verdict.worst_gain > 0


def test_nash_check_rejects_negative_eps(pd):
    with pytest.raises(ValueError):
        is_epsilon_nash(pd, StrategyProfile(tuple(s.actions[0] for s in pd.spaces)), -1.0, CFG)


def test_matching_pennies_has_no_pure_equilibrium():
    game = bimatrix_game([[1, -1], [-1, 1]], [[-1, 1], [1, -1]])
    assert enumerate_pure_nash_finite(game) == []


def test_coordination_equilibria_in_lexicographic_order():
    game = coordination_game(3, 2)
    found = enumerate_pure_nash_finite(game)
    assert [tuple(a[0] for a in p) for p in found] == [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]


def test_constant_game_every_profile_is_nash():
    space = FiniteSpace(((0.0,), (1.0,)))
    game = Game((space, space, space), lambda i, p: 4.0)
    assert len(enumerate_pure_nash_finite(game)) == 8


def test_eps_widens_the_equilibrium_set():
    game = bimatrix_game([[1.0, 0.0], [0.9, 0.0]], [[1.0, 1.0], [1.0, 1.0]])
    assert len(enumerate_pure_nash_finite(game, 0.0)) == 3
    assert len(enumerate_pure_nash_finite(game, 0.2)) == 4


def test_enumeration_needs_finite_spaces(cournot):
    with pytest.raises(NotFiniteGame):
        enumerate_pure_nash_finite(cournot)


def test_enumeration_cap():
    space = FiniteSpace(tuple((float(k),) for k in range(10)))
    game = Game((space,) * 4, lambda i, p: 0.0)
    with pytest.raises(ProductTooLarge):
        enumerate_pure_nash_finite(game, cap=1_000)


def test_payoff_tensor_layout(pd):
    tensor = payoff_tensor(pd)
    assert tensor.shape == (2, 2, 2)
    assert tensor[0, 1].tolist() == [0.0, 5.0]


def test_enumeration_agrees_with_nash_check_on_random_games():
    rng = np.random.default_rng(20240601)
    for _ in range(50):
        row = rng.integers(0, 10, size=(3, 3)).astype(float)
        col = rng.integers(0, 10, size=(3, 3)).astype(float)
        game = bimatrix_game(row.tolist(), col.tolist())
        found = set(p.actions for p in enumerate_pure_nash_finite(game, 0.0))
        for profile in all_profiles(game):
            assert (profile.actions in found) == is_epsilon_nash(game, profile, 0.0, CFG).is_nash


def test_worst_deviation_is_never_negative():
    game = bimatrix_game([[3, 1], [2, 4]], [[1, 2], [3, 0]])
    for profile in all_profiles(game):
        verdict = is_epsilon_nash(game, profile, 0.0, CFG)
        assert verdict.worst_gain >= 0
        assert all(g >= 0 for g in verdict.gains)


def test_affine_rescaling_keeps_verdicts(pd, cournot, rescale):
    scaled = rescale(pd)
    assert enumerate_pure_nash_finite(scaled) == enumerate_pure_nash_finite(pd)
    for profile in all_profiles(pd):
        assert is_epsilon_nash(scaled, profile, 0.0, CFG).is_nash == is_epsilon_nash(pd, profile, 0.0, CFG).is_nash

    scaled_cournot = rescale(cournot)
    for profile in [StrategyProfile((8 / 3, 8 / 3)), StrategyProfile((4.0, 2.0)), StrategyProfile((0.0, 8.0))]:
        assert is_epsilon_nash(scaled_cournot, profile, 0.0, CFG).is_nash == \
            is_epsilon_nash(cournot, profile, 0.0, CFG).is_nash


def test_grid_candidates_find_cournot_nash(cournot, fast_cfg):
    found = grid_nash_candidates(cournot, 41, 0.0, fast_cfg)
    assert found
    for profile in found:
        assert profile.actions == pytest.approx((8 / 3, 8 / 3), abs=1e-4)


def test_grid_candidates_keep_distinct_equilibria():
    # u_i = a_i (a_j - 1/2): pure equilibria at (0, 0), (1/2, 1/2) and (1, 1)
    space = IntervalSpace(0.0, 1.0)
    game = Game((space, space), lambda i, p: p[i] * (p[1 - i] - 0.5))
    found = grid_nash_candidates(game, 41, 0.0, CFG)
    assert [p.actions for p in found] == [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]


def test_grid_candidates_find_asymmetric_cournot_nash(fast_cfg):
    # q1 = (a - 2 c1 + c2) / 3b = 10/3, q2 = (a - 2 c2 + c1) / 3b = 4/3
    game = linear_duopoly_game(LinearDuopolyParams(a=10.0, b=1.0, c1=2.0, c2=4.0))
    found = grid_nash_candidates(game, 41, 1e-2, fast_cfg)
    assert found
    assert any(p.actions == pytest.approx((10 / 3, 4 / 3), abs=1e-4) for p in found)
    for profile in found:
        assert is_epsilon_nash(game, profile, 1e-6, fast_cfg).is_nash
