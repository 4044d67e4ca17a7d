import numpy as np
import pytest

from game.core import FiniteSpace, Game, IntervalSpace, StrategyProfile
from game.errors import DegenerateStep, NotALattice, ScalabilityDomainError
from game.library import bimatrix_game
from solvers.dynamics import Schedule, ScheduleKind, StopCriteria, make_rng, run_dynamics
from solvers.response import BrSolverConfig, DecisionRule
from solvers.stackelberg import linear_duopoly_game
from solvers.supermodular import (
    Verdict,
    _profile_meet_join,
    _scaled_region,
    check_br_properties,
    check_cross_partials,
    check_game_lattice,
    check_lattice_finite,
    check_quasi_concavity,
    check_supermodular_utility,
    count_optima,
    diagnose_supermodularity,
    is_unimodal,
    mixed_partial,
)

SMALL_CFG = BrSolverConfig(grid_points=81, refine_rounds=4)


def test_chain_and_box_are_lattices():
    assert check_lattice_finite([(0.0,), (1.0,), (2.0,)]).ok
    assert check_lattice_finite([(0, 0), (0, 1), (1, 0), (1, 1)]).ok


def test_antichain_is_not_a_lattice():
    check = check_lattice_finite([(0, 1), (1, 0)])
    assert not check.ok
    assert check.witness == ((0.0, 1.0), (1.0, 0.0))


def test_non_lattice_action_set_is_reported():
    space = FiniteSpace(((0.0, 1.0), (1.0, 0.0)))
    game = Game((space,), lambda i, p: 0.0)
    lattice = check_game_lattice(game)
    assert not lattice.ok and lattice.player == 0
    with pytest.raises(NotALattice):
        check_supermodular_utility(game, 0)
    assert diagnose_supermodularity(game, np.random.default_rng(0)).verdict is Verdict.NOT_SUPERMODULAR


def test_exhaustive_check_on_coordination_game():
    game = bimatrix_game([[1, 0], [0, 1]], [[1, 0], [0, 1]])
    check = check_supermodular_utility(game, 0)
    assert check.ok and check.exhaustive
    assert check.tested == 6


def test_exhaustive_check_finds_submodular_game():
    game = bimatrix_game([[0, 1], [1, 0]], [[0, 1], [1, 0]])
    check = check_supermodular_utility(game, 0)
    assert not check.ok
    a, b = check.counterexample
    low, high = _profile_meet_join(game, a, b)
    u = lambda p: game.utility(0, p)
    assert u(a) + u(b) > u(low) + u(high)


def test_product_game_is_supermodular(product):
    report = diagnose_supermodularity(product, np.random.default_rng(0), pairs=200, points=20,
                                      profiles=10, cfg=SMALL_CFG)
    assert report.verdict is Verdict.SUPERMODULAR
    assert all(c.ok for c in report.utilities)
    for result in report.cross_partials:
        assert result.min_value == pytest.approx(1.0, abs=1e-6)


def test_cournot_is_not_supermodular(cournot):
    report = diagnose_supermodularity(cournot, np.random.default_rng(0), pairs=200, points=20,
                                      profiles=10, cfg=SMALL_CFG)
    assert report.verdict is Verdict.NOT_SUPERMODULAR
    violations = [c for c in report.utilities if not c.ok]
    assert violations
    for check in violations:
        a, b = check.counterexample
        low, high = _profile_meet_join(cournot, a, b)
        u = lambda p: cournot.utility(check.player, p)
        assert u(a) + u(b) - u(low) - u(high) > 1e-9
    for result in report.cross_partials:
        assert result.min_value == pytest.approx(-1.0, abs=1e-6)


def test_mixed_partial_is_exact_on_bilinear_utility():
    game = Game((IntervalSpace(-5.0, 5.0), IntervalSpace(-5.0, 5.0)), lambda i, p: 2.5 * p[0] * p[1] + p[0] ** 2)
    assert mixed_partial(game, 0, 1, StrategyProfile((0.3, -1.2)), 1e-2, 1e-2) == pytest.approx(2.5, abs=1e-9)


def test_cross_partials_default_step(product):
    result = check_cross_partials(product, 0, 1, 30, rng=np.random.default_rng(4))
    assert result.ok
    assert result.steps == (1e-4, 1e-4)
    assert result.min_value == pytest.approx(1.0, abs=1e-6)


def test_cross_partials_resample_near_boundary(product):
    result = check_cross_partials(product, 0, 1, 30, h=0.2, rng=np.random.default_rng(1))
    assert result.resampled > 0
    assert result.samples == 30


def test_cross_partials_step_too_large(product):
    with pytest.raises(DegenerateStep):
        check_cross_partials(product, 0, 1, 5, h=0.6, rng=np.random.default_rng(0))


def test_count_optima():
    assert count_optima([0.0, 1.0, 0.0]) == 1
    assert count_optima([1.0, 0.0, 1.0]) == 2
    assert count_optima([0.0, 1.0, 1.0, 0.0]) == 1
    assert count_optima([1.0, 1.0, 1.0]) >= 2


def test_scaled_region():
    assert _scaled_region(IntervalSpace(0.0, 8.0), 2.0) == (0.0, 4.0)
    with pytest.raises(ScalabilityDomainError):
        _scaled_region(IntervalSpace(1.0, 1.5), 2.0)


def test_linear_follower_best_response_properties(symmetric_params):
    game = linear_duopoly_game(symmetric_params, upper=7.9)
    report = check_br_properties(game, profiles=100, alphas=(1.5, 2.0), rng=np.random.default_rng(0),
                                 cfg=SMALL_CFG, players=[1])
    assert report.uniqueness_ok
    assert report.positivity_ok
    assert report.scalability_ok
    assert report.players[0].scalability_samples == 200


def test_bimodal_utility_breaks_uniqueness():
    space = IntervalSpace(-2.0, 2.0)
    game = Game((space, space), lambda i, p: -(p[i] ** 2 - 1) ** 2)
    report = check_br_properties(game, profiles=5, alphas=(1.5,), rng=np.random.default_rng(0),
                                 cfg=SMALL_CFG, players=[0])
    assert not report.uniqueness_ok
    assert report.positivity_ok is None


def test_quasi_concavity_check():
    assert is_unimodal([0.0, 1.0, 2.0, 1.0])
    assert not is_unimodal([1.0, 0.0, 1.0])
    space = IntervalSpace(-2.0, 2.0)
    bimodal = Game((space,), lambda i, p: -(p[0] ** 2 - 1) ** 2)
    assert not check_quasi_concavity(bimodal, 0, 3, np.random.default_rng(0)).ok


def test_sampled_checks_agree_with_cross_partials(product, cournot):
    for game in (product, cournot):
        rng = np.random.default_rng(11)
        cross_ok = all(check_cross_partials(game, i, j, 20, rng=rng).ok for i, j in ((0, 1), (1, 0)))
        if cross_ok:
            assert all(check_supermodular_utility(game, i, 200, rng).ok for i in range(2))


def complements_game() -> Game:
    """u_i = a_i (1 + a_j / 2) - a_i^2 on [0, 2]^2; BR_i = 1/2 + a_j / 4, fixed point 2/3."""
    def utility(i, profile):
        own, other = profile[i], profile[1 - i]
        return own * (1 + other / 2) - own ** 2

    space = IntervalSpace(0.0, 2.0)
    return Game((space, space), utility, name="complements")


def test_complements_game_is_supermodular():
    report = diagnose_supermodularity(complements_game(), np.random.default_rng(0), pairs=200, points=20,
                                      profiles=10, cfg=SMALL_CFG)
    assert report.verdict is Verdict.SUPERMODULAR
    for result in report.cross_partials:
        assert result.min_value == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("schedule", [
    Schedule(ScheduleKind.SYNCHRONOUS),
    Schedule(ScheduleKind.ASYNCHRONOUS, inclusion_prob=0.5),
], ids=["synchronous", "asynchronous"])
@pytest.mark.parametrize("init", [(0.0, 0.0), (2.0, 2.0), (0.0, 2.0)])
def test_best_response_dynamics_on_complements_reach_the_fixed_point(schedule, init):
    game = complements_game()
    for seed in (0, 1, 2):
        trajectory = run_dynamics(game, StrategyProfile(init), DecisionRule.best(), schedule,
                                  BrSolverConfig(), StopCriteria(max_iters=200), make_rng(seed))
        assert trajectory.converged
        assert trajectory.final[0] == pytest.approx(2.0 / 3.0, abs=1e-4)
        assert trajectory.final[1] == pytest.approx(2.0 / 3.0, abs=1e-4)
