"""Strategic-form game model: action spaces, profiles, games and utility evaluation.

A game is the triple {N, (A_i), (u_i)}. Continuous action spaces are closed
scalar intervals; finite action spaces are ordered lists of action vectors.
Utilities are opaque evaluators ``u(i, profile) -> float``; all calculus on
them happens by finite differences in the solvers.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

from config import ACTION_TOL
from game.errors import (
    ActionOutOfSpace,
    InvalidGame,
    InvalidProfile,
    NonFiniteUtility,
)

logger = logging.getLogger(__name__)

Vector = Tuple[float, ...]
Action = Union[float, Vector]


def as_vector(action) -> Vector:
    """Coerces a scalar or a sequence of reals into a tuple of floats."""
    if isinstance(action, (int, float)):
        return (float(action),)
    return tuple(float(x) for x in action)


# --- Action Spaces ---

@dataclass(frozen=True)
class FiniteSpace:
    """An ordered, finite list of action vectors, optionally labelled."""
    actions: Tuple[Vector, ...]
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'actions', tuple(as_vector(a) for a in self.actions))
        if self.labels is not None:
            object.__setattr__(self, 'labels', tuple(str(l) for l in self.labels))

    @property
    def size(self) -> int:
        return len(self.actions)

    def index_of(self, action, tol: float = ACTION_TOL) -> Optional[int]:
        try:
            vec = as_vector(action)
        except (TypeError, ValueError):
            return None
        for k, candidate in enumerate(self.actions):
            if len(candidate) == len(vec) and all(abs(x - y) <= tol for x, y in zip(candidate, vec)):
                return k
        return None

    def contains(self, action, tol: float = ACTION_TOL) -> bool:
        return self.index_of(action, tol) is not None

    def label(self, index: int) -> str:
        if self.labels is not None and index < len(self.labels):
            return self.labels[index]
        return f"#{index}"


@dataclass(frozen=True)
class IntervalSpace:
    """A closed scalar interval [lo, hi]."""
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, 'lo', float(self.lo))
        object.__setattr__(self, 'hi', float(self.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, action, tol: float = ACTION_TOL) -> bool:
        if not isinstance(action, (int, float)):
            return False
        return self.lo - tol <= float(action) <= self.hi + tol


ActionSpace = Union[FiniteSpace, IntervalSpace]


def action_distance(a: Action, b: Action) -> float:
    """Max-norm distance between two actions of the same space."""
    if isinstance(a, tuple) or isinstance(b, tuple):
        va, vb = as_vector(a), as_vector(b)
        if len(va) != len(vb):
            return math.inf
        return max((abs(x - y) for x, y in zip(va, vb)), default=0.0)
    return abs(float(a) - float(b))


# --- Profiles ---

@dataclass(frozen=True)
class StrategyProfile:
    """One action per player, indexed by player id. Immutable."""
    actions: Tuple[Action, ...]

    def __post_init__(self):
        object.__setattr__(self, 'actions', tuple(self.actions))

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, i: int) -> Action:
        return self.actions[i]

    def __iter__(self):
        return iter(self.actions)

    def replace(self, i: int, action: Action) -> "StrategyProfile":
        """Unchecked copy with position i swapped; solvers use this on hot paths."""
        return StrategyProfile(self.actions[:i] + (action,) + self.actions[i + 1:])


def profile_distance(p: StrategyProfile, q: StrategyProfile) -> float:
    return max((action_distance(a, b) for a, b in zip(p, q)), default=0.0)


def profiles_close(p: StrategyProfile, q: StrategyProfile, tol: float = ACTION_TOL) -> bool:
    return len(p) == len(q) and profile_distance(p, q) <= tol


UtilityFunction = Callable[[int, StrategyProfile], float]


# --- Games ---

@dataclass(frozen=True)
class Game:
    """A strategic game {N, (A_i), (u_i)}; N is the number of spaces."""
    spaces: Tuple[ActionSpace, ...]
    utility: UtilityFunction
    name: str = "game"
    tags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'spaces', tuple(self.spaces))
        if len(self.spaces) < 1:
            raise InvalidGame("a game needs at least one player")

    @property
    def n_players(self) -> int:
        return len(self.spaces)

    @property
    def all_finite(self) -> bool:
        return all(isinstance(s, FiniteSpace) for s in self.spaces)

    @property
    def all_interval(self) -> bool:
        return all(isinstance(s, IntervalSpace) for s in self.spaces)


def canonical_action(space: ActionSpace, action, player: int = -1, tol: float = ACTION_TOL) -> Action:
    """Returns the stored form of `action` in `space`, or raises ActionOutOfSpace."""
    if isinstance(space, FiniteSpace):
        k = space.index_of(action, tol)
        if k is None:
            raise ActionOutOfSpace(f"player {player}: action {action!r} is not in the finite action set")
        return space.actions[k]
    if not space.contains(action, tol):
        raise ActionOutOfSpace(f"player {player}: action {action!r} outside [{space.lo}, {space.hi}]")
    return float(action)


def make_profile(game: Game, actions: Sequence) -> StrategyProfile:
    """Builds a validated profile; finite actions are snapped to their stored vectors."""
    if len(actions) != game.n_players:
        raise InvalidProfile(f"profile has {len(actions)} actions, game has {game.n_players} players")
    return StrategyProfile(tuple(canonical_action(s, a, i) for i, (s, a) in enumerate(zip(game.spaces, actions))))


def check_profile(game: Game, profile: StrategyProfile) -> None:
    if len(profile) != game.n_players:
        raise InvalidProfile(f"profile has {len(profile)} actions, game has {game.n_players} players")
    for i, (space, action) in enumerate(zip(game.spaces, profile)):
        if not space.contains(action):
            raise ActionOutOfSpace(f"player {i}: action {action!r} is outside its action space")


def default_profile(game: Game) -> StrategyProfile:
    """Every player at the lowest point of its space (first action / lo)."""
    return StrategyProfile(tuple(
        s.actions[0] if isinstance(s, FiniteSpace) else s.lo for s in game.spaces
    ))


def utility_of(game: Game, i: int, profile: StrategyProfile) -> float:
    """u_i(profile) with the finiteness check but no membership check."""
    value = float(game.utility(i, profile))
    if not math.isfinite(value):
        raise NonFiniteUtility(f"{game.name}: utility of player {i} at {profile.actions} is {value}")
    return value


def evaluate_utilities(game: Game, profile: StrategyProfile) -> List[float]:
    check_profile(game, profile)
    return [utility_of(game, i, profile) for i in range(game.n_players)]


def with_action(game: Game, profile: StrategyProfile, i: int, action) -> StrategyProfile:
    """The profile (a_i, a_{-i}) with player i's action replaced; input untouched."""
    if not 0 <= i < game.n_players:
        raise InvalidProfile(f"no player {i} in a {game.n_players}-player game")
    return profile.replace(i, canonical_action(game.spaces[i], action, i))


# --- Validation (checkable Kakutani hypotheses) ---

@dataclass
class SpaceCheck:
    player: int
    kind: str
    non_empty: bool
    compact: bool
    convex: bool
    issues: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.non_empty and self.compact and not self.issues


@dataclass
class ValidationReport:
    players: List[SpaceCheck]

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.players)

    @property
    def kakutani_spaces(self) -> bool:
        """Non-empty, compact and convex for every player."""
        return self.ok and all(p.convex for p in self.players)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "kakutani_spaces": self.kakutani_spaces,
            "players": [
                {"player": p.player, "kind": p.kind, "non_empty": p.non_empty,
                 "compact": p.compact, "convex": p.convex, "issues": list(p.issues)}
                for p in self.players
            ],
        }


def _check_space(i: int, space: ActionSpace) -> SpaceCheck:
    if isinstance(space, IntervalSpace):
        issues = []
        bounded = math.isfinite(space.lo) and math.isfinite(space.hi)
        if not bounded:
            issues.append("interval bounds must be finite")
        if not space.lo < space.hi:
            issues.append(f"lo < hi violated ({space.lo} >= {space.hi})")
        return SpaceCheck(i, "interval", non_empty=space.lo <= space.hi,
                          compact=bounded and space.lo < space.hi, convex=True, issues=issues)

    issues = []
    if space.size == 0:
        issues.append("empty action set")
    dims = {len(a) for a in space.actions}
    if len(dims) > 1:
        issues.append(f"action vectors have mixed dimensions {sorted(dims)}")
    for k in range(space.size):
        if space.index_of(space.actions[k]) != k:
            issues.append(f"duplicate action {space.actions[k]}")
    if any(not math.isfinite(x) for a in space.actions for x in a):
        issues.append("non-finite action component")
    # A finite set is compact; it is convex only as a singleton.
    return SpaceCheck(i, "finite", non_empty=space.size > 0, compact=True,
                      convex=space.size == 1, issues=issues)


def validate_game(game: Game) -> ValidationReport:
    report = ValidationReport([_check_space(i, s) for i, s in enumerate(game.spaces)])
    for check in report.players:
        if not check.ok:
            logger.warning(f"{game.name}: player {check.player} space fails: {'; '.join(check.issues)}")
    return report
