import math

import pytest

from game.core import (
    FiniteSpace,
    Game,
    IntervalSpace,
    StrategyProfile,
    canonical_action,
    evaluate_utilities,
    make_profile,
    validate_game,
    with_action,
)
from game.errors import ActionOutOfSpace, InvalidGame, InvalidProfile, NonFiniteUtility


def test_prisoners_dilemma_utilities(pd):
    defect = pd.spaces[0].actions[1]
    assert evaluate_utilities(pd, StrategyProfile((defect, defect))) == [1.0, 1.0]


def test_cournot_utilities(cournot):
    assert evaluate_utilities(cournot, StrategyProfile((4.0, 2.0))) == pytest.approx([8.0, 4.0])


def test_out_of_space_action_is_rejected(cournot):
    with pytest.raises(ActionOutOfSpace):
        evaluate_utilities(cournot, StrategyProfile((-1.0, 2.0)))


def test_wrong_profile_length(cournot):
    with pytest.raises(InvalidProfile):
        evaluate_utilities(cournot, StrategyProfile((1.0,)))


def test_nan_utility_raises():
    game = Game((IntervalSpace(0.0, 1.0),), lambda i, p: math.nan)
    with pytest.raises(NonFiniteUtility):
        evaluate_utilities(game, StrategyProfile((0.5,)))


def test_single_player_game_is_allowed():
    game = Game((FiniteSpace(((0.0,), (1.0,))),), lambda i, p: p[0][0])
    assert evaluate_utilities(game, StrategyProfile(((1.0,),))) == [1.0]


def test_game_needs_a_player():
    with pytest.raises(InvalidGame):
        Game((), lambda i, p: 0.0)


def test_with_action_leaves_input_untouched(cournot):
    profile = StrategyProfile((1.0, 2.0))
    moved = with_action(cournot, profile, 0, 3.0)
    assert moved.actions == (3.0, 2.0)
    assert profile.actions == (1.0, 2.0)


def test_with_action_boundary_and_errors(cournot):
    profile = StrategyProfile((1.0, 2.0))
    assert with_action(cournot, profile, 1, 10.0)[1] == 10.0
    with pytest.raises(ActionOutOfSpace):
        with_action(cournot, profile, 1, 10.5)
    with pytest.raises(InvalidProfile):
        with_action(cournot, profile, 2, 1.0)


def test_finite_actions_snap_to_stored_vectors(pd):
    profile = make_profile(pd, [1, (0.0,)])
    assert profile.actions == ((1.0,), (0.0,))
    assert canonical_action(pd.spaces[0], (1.0 + 1e-12,)) == (1.0,)


def test_labels_fall_back_to_index():
    space = FiniteSpace(((0.0,), (1.0,)))
    assert space.label(1) == "#1"


def test_validate_game_flags_bad_spaces():
    game = Game((IntervalSpace(1.0, 1.0), FiniteSpace(())), lambda i, p: 0.0)
    report = validate_game(game)
    assert not report.ok
    assert report.players[0].issues and report.players[1].issues
    assert not report.players[1].non_empty


def test_validate_game_kakutani_flags(cournot, pd):
    assert validate_game(cournot).kakutani_spaces
    report = validate_game(pd)
    assert report.ok
    assert not report.kakutani_spaces
    assert report.to_dict()["players"][0]["kind"] == "finite"


def test_duplicate_finite_actions_are_reported():
    game = Game((FiniteSpace(((0.0,), (0.0,))),), lambda i, p: 0.0)
    assert any("duplicate" in issue for issue in validate_game(game).players[0].issues)
