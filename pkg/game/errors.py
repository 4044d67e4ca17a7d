"""Exceptions raised by the game model and the solvers."""


class GameError(Exception):
    """Base class for every error raised by this package."""


class InvalidGame(GameError):
    """The game triple itself is malformed (player count, space list)."""


class InvalidProfile(GameError):
    """A strategy profile does not fit the game it is evaluated against."""


class ActionOutOfSpace(InvalidProfile):
    """An action is not a member of its player's action space."""


class NonFiniteUtility(GameError):
    """A utility evaluator returned NaN or infinity."""


class NotFiniteGame(GameError):
    """An operation that needs finite action sets got an interval space."""


class ProductTooLarge(GameError):
    """The joint action space exceeds the enumeration cap."""


class NotALattice(GameError):
    """A supermodularity test was asked for on a space that is not a lattice."""


class DegenerateStep(GameError):
    """A finite-difference stencil does not fit inside the action space."""


class ScalabilityDomainError(GameError):
    """Scaling the profile by alpha leaves no room inside the action space."""


class NonInteriorSolution(UserWarning):
    """The closed-form equilibrium hits a boundary; values were clamped."""


class InvalidSpec(GameError):
    """A game specification is incomplete or outside its validity range."""


class ConfigError(GameError):
    """A run configuration could not be read or validated."""
