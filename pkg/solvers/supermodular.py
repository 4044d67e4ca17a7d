"""Supermodularity diagnostics.

Covers the lattice test, the supermodular-function inequality
f(a) + f(b) <= f(a ^ b) + f(a v b), the cross-partial sufficient condition,
the best-response uniqueness / positivity / scalability properties and a 1-D
quasi-concavity check. On continuous spaces everything is sampled, so a clean
sample is reported as "no violation found", never as a proof.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import (
    CROSS_PARTIAL_TOL,
    DEFAULT_BR_ALPHAS,
    DEFAULT_BR_PROFILES,
    DEFAULT_CROSS_PARTIAL_POINTS,
    DEFAULT_SUPERMODULAR_PAIRS,
    FD_STEP_FRACTION,
    LATTICE_CAP,
    SUPERMODULAR_TOL,
    UTILITY_TIE_TOL,
)
from game.core import (
    FiniteSpace,
    Game,
    IntervalSpace,
    StrategyProfile,
    Vector,
    as_vector,
    utility_of,
)
from game.errors import (
    DegenerateStep,
    InvalidGame,
    NotALattice,
    ProductTooLarge,
    ScalabilityDomainError,
)
from solvers.response import BrSolverConfig, best_response, draw_action

logger = logging.getLogger(__name__)

MAX_RESAMPLES_PER_POINT = 1_000


# --- Lattice operations ---

def meet(a: Sequence[float], b: Sequence[float]) -> Vector:
    return tuple(min(x, y) for x, y in zip(a, b))


def join(a: Sequence[float], b: Sequence[float]) -> Vector:
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass
class LatticeCheck:
    ok: bool
    witness: Optional[Tuple[Vector, Vector]] = None
    player: Optional[int] = None
    note: str = ""


def check_lattice_finite(points: Sequence[Sequence[float]], cap: int = LATTICE_CAP) -> LatticeCheck:
    """Whether a finite set of vectors is closed under componentwise min and max."""
    vectors = [as_vector(p) for p in points]
    if len(vectors) > cap:
        raise ProductTooLarge(f"lattice check over {len(vectors)} points exceeds cap {cap}")
    members = set(vectors)
    for a, b in itertools.combinations(vectors, 2):
        if meet(a, b) not in members or join(a, b) not in members:
            return LatticeCheck(False, witness=(a, b), note="meet or join missing")
    return LatticeCheck(True, note="closed under meet and join")


def check_game_lattice(game: Game, cap: int = LATTICE_CAP) -> LatticeCheck:
    """The joint space is a lattice iff every factor is; intervals are chains."""
    if game.all_interval:
        return LatticeCheck(True, note="box space")
    for i, space in enumerate(game.spaces):
        if isinstance(space, FiniteSpace):
            check = check_lattice_finite(space.actions, cap)
            if not check.ok:
                check.player = i
                return check
    return LatticeCheck(True, note="product of lattices")


def _profile_meet_join(game: Game, p: StrategyProfile,
                       q: StrategyProfile) -> Tuple[StrategyProfile, StrategyProfile]:
    low, high = [], []
    for space, a, b in zip(game.spaces, p, q):
        if isinstance(space, IntervalSpace):
            low.append(min(a, b))
            high.append(max(a, b))
            continue
        lo_k, hi_k = space.index_of(meet(a, b)), space.index_of(join(a, b))
        if lo_k is None or hi_k is None:
            raise NotALattice(f"{game.name}: meet/join of {a} and {b} leaves the action set")
        low.append(space.actions[lo_k])
        high.append(space.actions[hi_k])
    return StrategyProfile(tuple(low)), StrategyProfile(tuple(high))


# --- Supermodular utility inequality ---

@dataclass
class SupermodularityCheck:
    player: int
    ok: bool
    exhaustive: bool
    tested: int
    counterexample: Optional[Tuple[StrategyProfile, StrategyProfile]] = None
    excess: float = 0.0


def _all_profiles(game: Game) -> List[StrategyProfile]:
    return [StrategyProfile(p) for p in itertools.product(*(s.actions for s in game.spaces))]


def check_supermodular_utility(game: Game, i: int, pairs: int = DEFAULT_SUPERMODULAR_PAIRS,
                               rng: Optional[np.random.Generator] = None,
                               tol: float = SUPERMODULAR_TOL,
                               cap: int = LATTICE_CAP) -> SupermodularityCheck:
    """Tests u_i(a) + u_i(b) <= u_i(a ^ b) + u_i(a v b).

    Finite games are tested on every unordered pair of profiles, anything else
    on `pairs` uniformly drawn pairs.
    """
    lattice = check_game_lattice(game, cap)
    if not lattice.ok:
        raise NotALattice(f"{game.name}: player {lattice.player} action set is not a lattice")

    cache: Dict[tuple, float] = {}

    def f(profile: StrategyProfile) -> float:
        key = profile.actions
        if key not in cache:
            cache[key] = utility_of(game, i, profile)
        return cache[key]

    exhaustive = game.all_finite
    if exhaustive:
        profiles = _all_profiles(game)
        if len(profiles) > cap:
            raise ProductTooLarge(f"{game.name}: {len(profiles)} profiles exceed cap {cap}")
        candidates = itertools.combinations(profiles, 2)
    else:
        if rng is None:
            raise ValueError("sampled supermodularity check needs an rng")

        def sampled():
            for _ in range(pairs):
                a = StrategyProfile(tuple(draw_action(game, k, rng) for k in range(game.n_players)))
                b = StrategyProfile(tuple(draw_action(game, k, rng) for k in range(game.n_players)))
                yield a, b
        candidates = sampled()

    tested = 0
    for a, b in candidates:
        tested += 1
        low, high = _profile_meet_join(game, a, b)
        excess = f(a) + f(b) - f(low) - f(high)
        if excess > tol:
            logger.info(f"{game.name}: player {i} supermodularity violated by {excess:.3e}")
            return SupermodularityCheck(i, False, exhaustive, tested, (a, b), excess)
    return SupermodularityCheck(i, True, exhaustive, tested)


# --- Cross-partial sufficient condition ---

@dataclass
class CrossPartialResult:
    players: Tuple[int, int]
    min_value: float
    ok: bool
    witness: Optional[StrategyProfile]
    samples: int
    resampled: int
    steps: Tuple[float, float]


def _step_for(space: IntervalSpace, h: Optional[float]) -> float:
    return h if h is not None else FD_STEP_FRACTION * space.width


def mixed_partial(game: Game, i: int, j: int, profile: StrategyProfile, h_i: float, h_j: float) -> float:
    """Central four-point estimate of d^2 u_i / (da_i da_j) at `profile`."""
    a_i, a_j = profile[i], profile[j]

    def u(x: float, y: float) -> float:
        return utility_of(game, i, profile.replace(i, x).replace(j, y))

    return (u(a_i + h_i, a_j + h_j) - u(a_i + h_i, a_j - h_j)
            - u(a_i - h_i, a_j + h_j) + u(a_i - h_i, a_j - h_j)) / (4.0 * h_i * h_j)


def check_cross_partials(game: Game, i: int, j: int, points: int = DEFAULT_CROSS_PARTIAL_POINTS,
                         h: Optional[float] = None, rng: Optional[np.random.Generator] = None,
                         tol: float = CROSS_PARTIAL_TOL) -> CrossPartialResult:
    """Minimum sampled cross-partial of u_i in (a_i, a_j); ok iff it is >= -tol."""
    if i == j:
        raise ValueError("cross-partials need two distinct players")
    space_i, space_j = game.spaces[i], game.spaces[j]
    if not (isinstance(space_i, IntervalSpace) and isinstance(space_j, IntervalSpace)):
        raise InvalidGame(f"{game.name}: players {i} and {j} need interval spaces")
    if rng is None:
        raise ValueError("cross-partial sampling needs an rng")
    h_i, h_j = _step_for(space_i, h), _step_for(space_j, h)
    if not (h_i > 0 and h_j > 0):
        raise ValueError("finite-difference step must be positive")

    minimum, witness, resampled = math.inf, None, 0
    for _ in range(points):
        for attempt in range(MAX_RESAMPLES_PER_POINT):
            profile = StrategyProfile(tuple(draw_action(game, k, rng) for k in range(game.n_players)))
            fits = (space_i.lo <= profile[i] - h_i and profile[i] + h_i <= space_i.hi
                    and space_j.lo <= profile[j] - h_j and profile[j] + h_j <= space_j.hi)
            if fits:
                break
            resampled += 1
        else:
            raise DegenerateStep(f"{game.name}: step ({h_i}, {h_j}) does not fit inside the spaces")
        value = mixed_partial(game, i, j, profile, h_i, h_j)
        if value < minimum:
            minimum, witness = value, profile
    if resampled:
        logger.info(f"{game.name}: {resampled} cross-partial points too close to the boundary were re-sampled")
    return CrossPartialResult((i, j), minimum, minimum >= -tol, witness, points, resampled, (h_i, h_j))


# --- Best-response properties ---

@dataclass
class BrPlayerReport:
    player: int
    resolution: int
    samples: int
    uniqueness_ok: bool = True
    uniqueness_witness: Optional[StrategyProfile] = None
    # None when the space reaches below zero and positivity does not apply
    positivity_ok: Optional[bool] = True
    positivity_witness: Optional[StrategyProfile] = None
    scalability_ok: bool = True
    scalability_witness: Optional[Tuple[StrategyProfile, float]] = None
    scalability_samples: int = 0


@dataclass
class BrPropertyReport:
    players: List[BrPlayerReport]
    alphas: Tuple[float, ...]

    @property
    def uniqueness_ok(self) -> bool:
        return all(p.uniqueness_ok for p in self.players)

    @property
    def positivity_ok(self) -> Optional[bool]:
        verdicts = [p.positivity_ok for p in self.players if p.positivity_ok is not None]
        return all(verdicts) if verdicts else None

    @property
    def scalability_ok(self) -> bool:
        return all(p.scalability_ok for p in self.players)


def count_optima(values: Sequence[float], tie_tol: float = UTILITY_TIE_TOL) -> int:
    """Number of tolerance-distinct maxima on a grid.

    Runs of adjacent near-maximal points count once; a run longer than two
    points is a plateau and counts as many optima.
    """
    values = np.asarray(values, dtype=float)
    near = values >= values.max() - tie_tol
    runs, length, plateau = 0, 0, False
    for flag in near:
        if flag:
            length += 1
        else:
            if length:
                runs += 1
                plateau |= length > 2
            length = 0
    if length:
        runs += 1
        plateau |= length > 2
    return max(runs, 2) if plateau else runs


def _scaled_region(space: IntervalSpace, alpha: float) -> Tuple[float, float]:
    if space.hi / alpha < space.lo:
        raise ScalabilityDomainError(f"hi/alpha = {space.hi / alpha} falls below lo = {space.lo}")
    return max(space.lo, space.lo / alpha), space.hi / alpha


def check_br_properties(game: Game, profiles: int = DEFAULT_BR_PROFILES,
                        alphas: Sequence[float] = DEFAULT_BR_ALPHAS,
                        rng: Optional[np.random.Generator] = None,
                        cfg: BrSolverConfig = BrSolverConfig(),
                        players: Optional[Sequence[int]] = None,
                        tie_tol: float = UTILITY_TIE_TOL,
                        scal_margin: float = 0.0) -> BrPropertyReport:
    """Samples the uniqueness, positivity and scalability properties of BR_i."""
    if not game.all_interval:
        raise InvalidGame(f"{game.name}: best-response properties need scalar interval spaces")
    if rng is None:
        raise ValueError("best-response property sampling needs an rng")
    if any(not alpha > 1 for alpha in alphas):
        raise ValueError(f"every alpha must exceed 1, got {list(alphas)}")
    regions = {alpha: [_scaled_region(s, alpha) for s in game.spaces] for alpha in alphas}
    players = list(range(game.n_players)) if players is None else list(players)

    reports = []
    for i in players:
        space = game.spaces[i]
        report = BrPlayerReport(i, cfg.grid_points, profiles)
        grid = np.linspace(space.lo, space.hi, cfg.grid_points)
        if space.lo < 0:
            report.positivity_ok = None

        for _ in range(profiles):
            profile = StrategyProfile(tuple(draw_action(game, k, rng) for k in range(game.n_players)))
            values = [utility_of(game, i, profile.replace(i, float(x))) for x in grid]
            if report.uniqueness_ok and count_optima(values, tie_tol) != 1:
                report.uniqueness_ok, report.uniqueness_witness = False, profile
            if report.positivity_ok and not best_response(game, i, profile, cfg) > 0:
                report.positivity_ok, report.positivity_witness = False, profile

        for alpha in alphas:
            region = regions[alpha]
            for _ in range(profiles):
                profile = StrategyProfile(tuple(float(rng.uniform(lo, hi)) for lo, hi in region))
                scaled = StrategyProfile(tuple(alpha * a for a in profile))
                report.scalability_samples += 1
                lhs = alpha * best_response(game, i, profile, cfg)
                rhs = best_response(game, i, scaled, cfg) + scal_margin
                if report.scalability_ok and not lhs > rhs:
                    report.scalability_ok, report.scalability_witness = False, (profile, alpha)
        reports.append(report)
    return BrPropertyReport(reports, tuple(alphas))


# --- Quasi-concavity check ---

@dataclass
class QuasiConcavityCheck:
    player: int
    ok: bool
    samples: int
    witness: Optional[StrategyProfile] = None


def is_unimodal(values: Sequence[float], tol: float = UTILITY_TIE_TOL) -> bool:
    """No point dips below both the best value to its left and to its right."""
    values = np.asarray(values, dtype=float)
    left = np.maximum.accumulate(values)
    right = np.maximum.accumulate(values[::-1])[::-1]
    inner = values[1:-1]
    return bool(np.all(inner >= np.minimum(left[:-2], right[2:]) - tol))


def check_quasi_concavity(game: Game, i: int, samples: int, rng: np.random.Generator,
                          grid_points: int = 101) -> Optional[QuasiConcavityCheck]:
    """Samples u_i along player i's own axis; None for finite spaces."""
    space = game.spaces[i]
    if not isinstance(space, IntervalSpace):
        return None
    grid = np.linspace(space.lo, space.hi, grid_points)
    for _ in range(samples):
        profile = StrategyProfile(tuple(draw_action(game, k, rng) for k in range(game.n_players)))
        values = [utility_of(game, i, profile.replace(i, float(x))) for x in grid]
        if not is_unimodal(values):
            return QuasiConcavityCheck(i, False, samples, profile)
    return QuasiConcavityCheck(i, True, samples)


# --- Combined report ---

class Verdict(str, Enum):
    SUPERMODULAR = "Supermodular"
    NOT_SUPERMODULAR = "NotSupermodular"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class SupermodularReport:
    lattice: LatticeCheck
    utilities: List[SupermodularityCheck]
    cross_partials: List[CrossPartialResult]
    br: Optional[BrPropertyReport]
    quasi_concavity: List[QuasiConcavityCheck]
    verdict: Verdict
    reasons: List[str] = field(default_factory=list)

    @property
    def lattice_ok(self) -> bool:
        return self.lattice.ok


def diagnose_supermodularity(game: Game, rng: np.random.Generator,
                             pairs: int = DEFAULT_SUPERMODULAR_PAIRS,
                             points: int = DEFAULT_CROSS_PARTIAL_POINTS,
                             profiles: int = DEFAULT_BR_PROFILES,
                             alphas: Sequence[float] = DEFAULT_BR_ALPHAS,
                             cfg: BrSolverConfig = BrSolverConfig(),
                             cross_tol: float = CROSS_PARTIAL_TOL) -> SupermodularReport:
    """Runs every applicable check and folds them into one verdict."""
    reasons: List[str] = []
    lattice = check_game_lattice(game)
    if not lattice.ok:
        reasons.append(f"player {lattice.player} action set is not a lattice")
        return SupermodularReport(lattice, [], [], None, [], Verdict.NOT_SUPERMODULAR, reasons)

    utilities = [check_supermodular_utility(game, i, pairs, rng) for i in range(game.n_players)]
    for check in utilities:
        if not check.ok:
            reasons.append(f"player {check.player} utility violates the supermodular inequality by {check.excess:.6g}")

    interval_players = [i for i, s in enumerate(game.spaces) if isinstance(s, IntervalSpace)]
    cross = [
        check_cross_partials(game, i, j, points, rng=rng, tol=cross_tol)
        for i in interval_players for j in interval_players if i != j
    ]
    for result in cross:
        if not result.ok:
            reasons.append(f"cross-partial of u_{result.players[0]} in players {result.players} reaches {result.min_value:.6g}")

    br = check_br_properties(game, profiles, alphas, rng, cfg) if game.all_interval and profiles > 0 else None
    checks = [p for p in (check_quasi_concavity(game, i, min(profiles, 20), rng)
                          for i in range(game.n_players)) if p is not None]

    if reasons:
        verdict = Verdict.NOT_SUPERMODULAR
    elif game.all_finite:
        verdict = Verdict.SUPERMODULAR
        reasons.append("exhaustive check found no violation")
    elif game.all_interval:
        verdict = Verdict.SUPERMODULAR
        reasons.append("box space with non-negative sampled cross-partials")
    else:
        verdict = Verdict.INCONCLUSIVE
        reasons.append("sampled checks found no violation")
    logger.info(f"{game.name}: supermodularity verdict {verdict.value}")
    return SupermodularReport(lattice, utilities, cross, br, checks, verdict, reasons)
