"""Engine settings and experiment configuration files."""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Annotated, Self, TypeVar

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from mpemba_relax.errors import ConfigError, MpembaError, NonPositiveTemperatureError
from mpemba_relax.qdot.analytic import SignConvention
from mpemba_relax.qdot.criterion import PreparingPairing, PreparingTemplate
from mpemba_relax.qdot.model import BathPair, DotParams, DotState, prepare_initial_state
from mpemba_relax.scan.boundary import BIAS_STEP, MU4_RANGE, MU4_SAMPLES, BoundarySettings
from mpemba_relax.scan.correlations import DEFAULT_SAMPLES, Observable
from mpemba_relax.twosite.generator import GeneratorMode
from mpemba_relax.twosite.model import SiteBath, StateOrdering, TwoSiteParams, TwoSiteState

if TYPE_CHECKING:
    from collections.abc import Iterator
    from pathlib import Path

    from mpemba_relax.types import RealVector

T = TypeVar("T")

DEFAULT_THREADS = 1
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_PRECISION = 12
MIN_PRECISION = 6
MAX_PRECISION = 17
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# =============================================================================
# Engine settings
# =============================================================================


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        msg = f"expected an integer, got {raw!r}"
        raise ConfigError(msg, field=name) from e


@dataclass(frozen=True, slots=True)
class EngineSettings:
    """Process-wide defaults; command-line flags and config files override them."""

    threads: int = DEFAULT_THREADS
    log_level: str = DEFAULT_LOG_LEVEL
    precision: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if self.threads < 1:
            msg = f"thread count must be at least 1, got {self.threads}"
            raise ConfigError(msg, field="threads")
        if self.log_level not in LOG_LEVELS:
            levels = ", ".join(LOG_LEVELS)
            msg = f"log level must be one of {levels}, got {self.log_level!r}"
            raise ConfigError(msg, field="log_level")
        if not MIN_PRECISION <= self.precision <= MAX_PRECISION:
            msg = f"precision must be in [{MIN_PRECISION}, {MAX_PRECISION}], got {self.precision}"
            raise ConfigError(msg, field="precision")

    @classmethod
    def from_env(cls) -> EngineSettings:
        """Build settings from environment variables."""
        return cls(
            threads=_env_int("MPEMBA_THREADS", DEFAULT_THREADS),
            log_level=os.environ.get("MPEMBA_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
            precision=_env_int("MPEMBA_PRECISION", DEFAULT_PRECISION),
        )


@contextmanager
def field_context(prefix: str) -> Iterator[None]:
    """Prefix the field of model errors raised inside the block with a config path."""
    try:
        yield
    except MpembaError as e:
        e.field = f"{prefix}.{e.field}" if e.field else prefix
        raise


# =============================================================================
# Experiment file schema
# =============================================================================


class ConfigModel(BaseModel):
    """Base model for configuration sections."""

    model_config = ConfigDict(extra="forbid", frozen=True)


class ModelKind(StrEnum):
    QDOT = "qdot"
    TWO_SITE = "two_site"


class ScanKind(StrEnum):
    BOUNDARY = "boundary"
    THRESHOLD = "threshold"
    CROSSING_TIME = "crossing_time"
    REGION_MAP = "region_map"


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


class QdotSection(ConfigModel):
    """Relaxation baths sit at mean_mu +/- bias (left +, right -)."""

    epsilon0: float
    u: float = Field(ge=0)
    gamma: float = Field(default=1.0, gt=0)
    mean_mu: float
    bias: float = 0.0
    temperature: float = 1.0


class SiteBathSection(ConfigModel):
    temperature: float = 1.0
    mu: float = 0.0


class TwoSiteSection(ConfigModel):
    omega1: float = 1.0
    omega2: float = 1.0
    delta: float = 0.2
    gamma1: float = Field(default=0.05, gt=0)
    gamma2: float = Field(default=0.05, gt=0)
    bath1: SiteBathSection = SiteBathSection()
    bath2: SiteBathSection = SiteBathSection()
    ordering: StateOrdering = StateOrdering.DOUBLY_OCCUPIED_FIRST


class PreparingBathsSection(ConfigModel):
    mu_left: float
    mu_right: float
    temperature: float = 1.0


class CoherenceSection(ConfigModel):
    re: float = 0.0
    im: float = 0.0


class InitialStateSection(ConfigModel):
    """Either explicit populations or (quantum dot only) preparing baths."""

    label: str = Field(pattern=r"^[A-Za-z0-9_]+$")
    populations: Annotated[list[float], Field(min_length=4, max_length=4)] | None = None
    preparing: PreparingBathsSection | None = None
    coherence: CoherenceSection | None = None

    @model_validator(mode="after")
    def _one_source(self) -> Self:
        if (self.populations is None) == (self.preparing is None):
            msg = "give exactly one of 'populations' or 'preparing'"
            raise ValueError(msg)
        return self


class TimeSection(ConfigModel):
    t_max: float = Field(gt=0)
    samples: int = Field(ge=2)

    def grid(self) -> RealVector:
        return np.linspace(0.0, self.t_max, self.samples)


class CriterionSection(ConfigModel):
    element: int = Field(default=2, ge=1, le=4)
    convention: SignConvention = SignConvention.EXACT
    pairing: PreparingPairing = PreparingPairing.BY_STATE


class AxisSection(ConfigModel):
    """Either explicit `values` or `num` points from `start` to `stop` inclusive."""

    values: Annotated[list[float], Field(min_length=1)] | None = None
    start: float | None = None
    stop: float | None = None
    num: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _complete(self) -> Self:
        ranged = (self.start, self.stop, self.num)
        if self.values is None and any(v is None for v in ranged):
            msg = "give 'values' or all of 'start', 'stop' and 'num'"
            raise ValueError(msg)
        if self.values is not None and any(v is not None for v in ranged):
            msg = "'values' cannot be combined with 'start', 'stop' or 'num'"
            raise ValueError(msg)
        return self

    def grid(self) -> list[float]:
        if self.values is not None:
            return list(self.values)
        return [float(x) for x in np.linspace(self.start, self.stop, self.num)]


class PreparingSection(ConfigModel):
    mu1: float = 2.0
    mu3: float = 1.0
    temperature: float = 1.0


class ScanSection(ConfigModel):
    kind: ScanKind
    # boundary and threshold
    targets: list[float] = Field(default_factory=lambda: [0.0, -1.0], min_length=1)
    mu2: AxisSection | None = None
    mu2_fixed: float = 2.0
    mu4_range: tuple[float, float] = MU4_RANGE
    mu4_samples: int = Field(default=MU4_SAMPLES, ge=3)
    preparing: PreparingSection = PreparingSection()
    bias_range: tuple[float, float] = (0.0, 20.0)
    bias_step: float = Field(default=BIAS_STEP, gt=0)
    # crossing_time and region_map
    biases: AxisSection | None = None
    means: AxisSection | None = None
    observable: Observable = Observable.CONCURRENCE
    element: int = Field(default=3, ge=1, le=4)
    horizon: float | None = Field(default=None, gt=0)
    samples: int = Field(default=DEFAULT_SAMPLES, ge=2)
    threads: int | None = Field(default=None, ge=1)


class OutputSection(ConfigModel):
    path: str | None = None
    format: OutputFormat = OutputFormat.CSV
    precision: int | None = Field(default=None, ge=MIN_PRECISION, le=MAX_PRECISION)


class ExperimentConfig(ConfigModel):
    model: ModelKind
    mode: GeneratorMode = GeneratorMode.LINDBLAD
    qdot: QdotSection | None = None
    two_site: TwoSiteSection | None = None
    initial_states: list[InitialStateSection] = Field(default_factory=list)
    time: TimeSection | None = None
    criterion: CriterionSection = CriterionSection()
    scan: ScanSection | None = None
    output: OutputSection = OutputSection()

    @model_validator(mode="after")
    def _sections_present(self) -> Self:
        if self.model is ModelKind.QDOT and self.qdot is None:
            msg = "model 'qdot' needs a 'qdot' section"
            raise ValueError(msg)
        if self.model is ModelKind.TWO_SITE and self.two_site is None:
            msg = "model 'two_site' needs a 'two_site' section"
            raise ValueError(msg)
        labels = [s.label for s in self.initial_states]
        if len(set(labels)) != len(labels):
            msg = "initial state labels must be unique"
            raise ValueError(msg)
        return self

    # -------------------------------------------------------------------------
    # Builders
    # -------------------------------------------------------------------------

    def dot_params(self) -> DotParams:
        section = self._require(self.qdot, "qdot")
        with field_context("qdot"):
            baths = _dot_baths(
                section.mean_mu + section.bias, section.mean_mu - section.bias, section.temperature
            )
            return DotParams(section.epsilon0, section.u, baths, section.gamma)

    def two_site_params(self) -> TwoSiteParams:
        section = self._require(self.two_site, "two_site")
        with field_context("two_site.bath1"):
            bath1 = SiteBath(section.bath1.temperature, section.bath1.mu)
        with field_context("two_site.bath2"):
            bath2 = SiteBath(section.bath2.temperature, section.bath2.mu)
        with field_context("two_site"):
            return TwoSiteParams(
                section.omega1,
                section.omega2,
                section.delta,
                section.gamma1,
                section.gamma2,
                bath1,
                bath2,
                section.ordering,
            )

    def dot_states(self, params: DotParams) -> list[tuple[str, DotState]]:
        states = []
        for i, s in enumerate(self._states()):
            with field_context(f"initial_states.{i}"):
                if s.preparing is not None:
                    p = s.preparing
                    baths = _dot_baths(
                        p.mu_left, p.mu_right, p.temperature, "preparing.temperature"
                    )
                    states.append((s.label, prepare_initial_state(params, baths)))
                else:
                    states.append((s.label, DotState(np.array(s.populations))))
        return states

    def two_site_states(self) -> list[tuple[str, TwoSiteState]]:
        states = []
        for i, s in enumerate(self._states()):
            with field_context(f"initial_states.{i}"):
                if s.populations is None:
                    msg = "two-site states need explicit populations"
                    raise ConfigError(msg, field="preparing")
                c = s.coherence or CoherenceSection()
                p = s.populations
                pops = (p[0], p[1], p[2], p[3])
                states.append((s.label, TwoSiteState(pops, complex(c.re, c.im))))
        return states

    def preparing_template(self) -> PreparingTemplate:
        scan = self.require_scan()
        with field_context("scan.preparing"):
            p = scan.preparing
            return PreparingTemplate(p.mu1, p.mu3, p.temperature, self.criterion.pairing)

    def boundary_settings(self) -> BoundarySettings:
        scan = self.require_scan()
        return BoundarySettings(
            self.criterion.element, self.criterion.convention, scan.mu4_range, scan.mu4_samples
        )

    def time_grid(self) -> RealVector:
        return self._require(self.time, "time").grid()

    def require_scan(self) -> ScanSection:
        return self._require(self.scan, "scan")

    def _states(self) -> list[InitialStateSection]:
        if not self.initial_states:
            msg = "at least one initial state is required"
            raise ConfigError(msg, field="initial_states")
        return self.initial_states

    @staticmethod
    def _require(section: T | None, name: str) -> T:
        if section is None:
            msg = f"missing '{name}' section"
            raise ConfigError(msg, field=name)
        return section


def _dot_baths(
    mu_left: float, mu_right: float, temperature: float, field: str = "temperature"
) -> BathPair:
    try:
        return BathPair(mu_left, mu_right, temperature, temperature)
    except NonPositiveTemperatureError as e:
        raise NonPositiveTemperatureError(e.message, field=field) from e


# =============================================================================
# Loading
# =============================================================================


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse YAML text into a validated ExperimentConfig.

    Raises:
        ConfigError: With the YAML line or the dotted path of the offending key.

    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" line {mark.line + 1}" if mark is not None else ""
        msg = f"invalid YAML in {source}{where}: {getattr(e, 'problem', e)}"
        raise ConfigError(msg) from e
    if not isinstance(data, dict):
        msg = f"{source} must contain a mapping at the top level"
        raise ConfigError(msg)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or None
        msg = f"{first['msg']} ({e.error_count()} error(s) in {source})"
        raise ConfigError(msg, field=location) from e


def load_config(path: Path) -> ExperimentConfig:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read config file: {e.strerror}"
        raise ConfigError(msg, field=str(path)) from e
    return parse_config(text, source=str(path))
