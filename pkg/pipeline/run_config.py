"""Run configuration: one JSON document per run, validated with pydantic."""
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import (
    DEFAULT_BR_ALPHAS,
    DEFAULT_BR_PROFILES,
    DEFAULT_CROSS_PARTIAL_POINTS,
    DEFAULT_FIX_TOL,
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_DRAWS,
    DEFAULT_MAX_ITERS,
    DEFAULT_PARABOLIC_POLISH,
    DEFAULT_REFINE_ROUNDS,
    DEFAULT_REFINE_SHRINK,
    DEFAULT_SUPERMODULAR_PAIRS,
)
from game.errors import ConfigError, InvalidSpec
from game.library import GameKind, parse_params
from solvers.dynamics import Schedule, ScheduleKind, StopCriteria
from solvers.response import BrSolverConfig, DecisionRule, RuleKind

logger = logging.getLogger(__name__)

FINITE_KINDS = {GameKind.PRISONERS_DILEMMA, GameKind.MATRIX_GAME, GameKind.COORDINATION_GAME}
DUOPOLY_KINDS = {GameKind.COURNOT_LINEAR, GameKind.STACKELBERG_LINEAR}


class Command(str, Enum):
    DYNAMICS = "Dynamics"
    NASH_CHECK = "NashCheck"
    ENUMERATE_NASH = "EnumerateNash"
    SUPERMODULAR = "Supermodular"
    SPNE = "Spne"


class _Spec(BaseModel):
    model_config = ConfigDict(extra='forbid')


class GameSpec(_Spec):
    kind: GameKind
    params: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def _params_fit_kind(self):
        try:
            parse_params(self.kind, self.params)
        except InvalidSpec as e:
            raise ValueError(str(e)) from e
        return self


class RuleSpec(_Spec):
    kind: RuleKind = RuleKind.BEST_RESPONSE
    improvement_eps: float = Field(default=1e-6, gt=0)
    max_draws: int = Field(default=DEFAULT_MAX_DRAWS, ge=1)

    def build(self) -> DecisionRule:
        return DecisionRule(self.kind, self.improvement_eps, self.max_draws)


class ScheduleSpec(_Spec):
    kind: ScheduleKind = ScheduleKind.SYNCHRONOUS
    inclusion_prob: float = Field(default=0.5, gt=0, le=1)

    def build(self) -> Schedule:
        return Schedule(self.kind, self.inclusion_prob)


class SolverSpec(_Spec):
    grid_points: int = Field(default=DEFAULT_GRID_POINTS, ge=3)
    refine_rounds: int = Field(default=DEFAULT_REFINE_ROUNDS, ge=0)
    refine_shrink: float = Field(default=DEFAULT_REFINE_SHRINK, gt=0, lt=1)
    parabolic_polish: bool = DEFAULT_PARABOLIC_POLISH

    def build(self) -> BrSolverConfig:
        return BrSolverConfig(self.grid_points, self.refine_rounds, self.refine_shrink, self.parabolic_polish)


class StopSpec(_Spec):
    max_iters: int = Field(default=DEFAULT_MAX_ITERS, ge=1)
    fix_tol: float = Field(default=DEFAULT_FIX_TOL, ge=0)

    def build(self) -> StopCriteria:
        return StopCriteria(self.max_iters, self.fix_tol)


class DiagnosticsSpec(_Spec):
    pairs: int = Field(default=DEFAULT_SUPERMODULAR_PAIRS, ge=1)
    points: int = Field(default=DEFAULT_CROSS_PARTIAL_POINTS, ge=1)
    profiles: int = Field(default=DEFAULT_BR_PROFILES, ge=0)
    alphas: List[float] = Field(default_factory=lambda: list(DEFAULT_BR_ALPHAS))

    @field_validator('alphas')
    @classmethod
    def _alphas_above_one(cls, alphas: List[float]) -> List[float]:
        if any(not a > 1 for a in alphas):
            raise ValueError("every alpha must be > 1")
        return alphas


class RunConfig(_Spec):
    command: Command
    game: GameSpec
    seed: Optional[int] = Field(default=None, ge=0)
    init: Optional[List[Any]] = None
    profile: Optional[List[Any]] = None
    eps: float = Field(default=1e-6, ge=0)
    resolution: int = Field(default=101, ge=2)
    rule: RuleSpec = Field(default_factory=RuleSpec)
    schedule: ScheduleSpec = Field(default_factory=ScheduleSpec)
    solver: SolverSpec = Field(default_factory=SolverSpec)
    stop: StopSpec = Field(default_factory=StopSpec)
    diagnostics: DiagnosticsSpec = Field(default_factory=DiagnosticsSpec)
    trace: Optional[str] = None
    report: Optional[str] = None

    @property
    def uses_randomness(self) -> bool:
        if self.command is Command.DYNAMICS:
            return self.schedule.build().uses_rng or self.rule.kind is RuleKind.BETTER_RESPONSE
        if self.command is Command.SUPERMODULAR:
            return self.game.kind not in FINITE_KINDS
        return False

    @model_validator(mode='after')
    def _command_requirements(self):
        if self.command is Command.NASH_CHECK and self.profile is None:
            raise ValueError("profile: NashCheck needs the profile to verify")
        if self.uses_randomness and self.seed is None:
            raise ValueError(f"seed: {self.command.value} with this game/schedule/rule consumes randomness")
        return self


def _describe(e: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(x) for x in err['loc']) or 'config'}: {err['msg']}" for err in e.errors())


def parse_run_config(document: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(_describe(e)) from e


def serialize_run_config(config: RunConfig) -> Dict[str, Any]:
    return config.model_dump(mode='json')


def load_run_config(path: str, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Reads a JSON run configuration; CLI overrides (seed, trace, report) win."""
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            document[key] = value
    config = parse_run_config(document)
    logger.info(f"Loaded {config.command.value} config for {config.game.kind.value} from {path}")
    return config
