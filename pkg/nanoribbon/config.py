import json
import logging
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from nanoribbon.errors import ConfigurationError
from nanoribbon.models import PotentialSpec
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import thresholds

logger = logging.getLogger(__name__)

_worker_limit: Optional[int] = None


def configure_workers(n: Optional[int]) -> None:
    """Cap the number of worker threads used by parallel scans."""
    global _worker_limit
    if n is not None and n < 1:
        raise ConfigurationError(f"thread count must be >= 1, got {n}")
    _worker_limit = n


def get_worker_limit() -> int:
    return _worker_limit or os.cpu_count() or 1


class GeometryConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    L: float = Field(gt=0)
    R0: float = Field(default=3.0, gt=0)

    def build(self) -> RibbonGeometry:
        return RibbonGeometry(L=self.L, R0=self.R0)


class RegimeConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    N: Optional[int] = Field(default=None, ge=1)
    eps: Optional[float] = None
    omega: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_energy(self) -> "RegimeConfig":
        if self.omega is None and (self.N is None or self.eps is None):
            raise ValueError("give either omega or both N and eps")
        return self


@dataclass(frozen=True)
class ResolvedSolver:
    """Concrete discretisation for one solve."""

    K: int
    X: float
    steps: int
    tol: float
    extraction_offset: float
    max_condition: float
    n_quad: int

    @property
    def h(self) -> float:
        return 2.0 * self.X / self.steps

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "X": self.X,
            "steps": self.steps,
            "h": self.h,
            "tol": self.tol,
            "extraction_offset": self.extraction_offset,
        }


class SolverConfig(BaseModel):
    """
    Discretisation of the folded-cylinder solver.

    J_modes is the number of transverse channels kept (smallest |kappa|
    first); X the half-length of the computational interval. Unset values
    are derived from the threshold index and the potential support.
    """

    model_config = ConfigDict(extra="forbid")

    J_modes: Optional[int] = Field(default=None, ge=1)
    nx: Optional[int] = Field(default=None, ge=8)
    X: Optional[float] = Field(default=None, gt=0)
    margin: float = Field(default=4.0, gt=0)
    points_per_unit: int = Field(default=64, ge=4)
    margin_decay: float = Field(default=1e-8, gt=0, lt=1)
    tol: float = Field(default=1e-8, gt=0)
    extraction_offset: float = Field(default=0.5, gt=0)
    max_condition: float = Field(default=1e13, gt=1)
    n_quad: int = Field(default=128, ge=8)

    def resolve(self, geom: RibbonGeometry, N: int, potential_extent: float, omega: float) -> ResolvedSolver:
        """
        Fill in channel count and interval for a solve at energy omega.

        Raises:
            ConfigurationError: too few channels, or X inside the potential support
        """
        K = self.J_modes if self.J_modes is not None else N + 8
        if K < N + 4:
            raise ConfigurationError(f"J_modes={K} must be at least N + 4 = {N + 4}")
        support = max(geom.R0, potential_extent)
        discarded = thresholds(geom, K + 1)[K + 1].omega
        if discarded <= omega:
            raise ConfigurationError(
                f"J_modes={K} drops a propagating channel (|kappa|={discarded:.5f} <= omega={omega:.5f})"
            )
        gamma = math.sqrt((discarded - omega) * (discarded + omega))
        needed = support + math.log(1.0 / self.margin_decay) / gamma
        if self.X is not None:
            X = self.X
            if X <= potential_extent + self.extraction_offset:
                raise ConfigurationError(
                    f"X={X} must exceed the potential support {potential_extent:.3f} plus the extraction offset"
                )
            if X < needed:
                logger.warning("X=%.3f gives discarded-channel suppression above %.1e", X, self.margin_decay)
        else:
            X = max(support + self.margin, needed)
        steps = self.nx - 1 if self.nx is not None else int(math.ceil(2.0 * X * self.points_per_unit))
        return ResolvedSolver(
            K=K,
            X=float(X),
            steps=steps,
            tol=self.tol,
            extraction_offset=self.extraction_offset,
            max_condition=self.max_condition,
            n_quad=self.n_quad,
        )


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_quad: int = Field(default=128, ge=8)
    panels: Tuple[int, int] = (16, 4)
    nodes_per_panel: int = Field(default=16, ge=2)


class SynthesisConfig(BaseModel):
    """Bump basis and fixed-point controls of the inverse design."""

    model_config = ConfigDict(extra="forbid")

    bumps: Optional[int] = Field(default=None, ge=1)
    R0: float = Field(default=2.0, gt=0)
    bump_width: float = Field(default=0.25, gt=0)
    max_iterations: int = Field(default=20, ge=1)
    step_tol: float = Field(default=1e-8, gt=0)
    refine_delta: bool = True
    refine_bounds: Tuple[float, float] = (0.8, 1.2)
    detection_tol: float = Field(default=1e-4, gt=0)

    @model_validator(mode="after")
    def _bounds_order(self) -> "SynthesisConfig":
        lo, hi = self.refine_bounds
        if not 0 < lo < 1 < hi:
            raise ValueError("refine_bounds must satisfy 0 < lo < 1 < hi")
        return self


class RunConfig(BaseSettings):
    """
    Everything a pipeline run needs. Values come only from keyword arguments
    and an explicit JSON file; the environment is never consulted.
    """

    model_config = SettingsConfigDict(extra="forbid")

    geometry: GeometryConfig
    regime: Optional[RegimeConfig] = None
    solver: SolverConfig = Field(default_factory=SolverConfig)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    synthesis: SynthesisConfig = Field(default_factory=SynthesisConfig)
    potential_path: Optional[Path] = None

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):
        return (init_settings,)

    @model_validator(mode="after")
    def _potential_exists(self) -> "RunConfig":
        if self.potential_path is not None and not self.potential_path.exists():
            raise ValueError(f"potential file {self.potential_path} does not exist")
        return self

    def load_potential(self) -> PotentialSpec:
        """The referenced potential, or the zero potential when none is given."""
        geom = self.geometry
        if self.potential_path is None:
            return PotentialSpec.zero(geom.L, geom.R0)
        potential = PotentialSpec.from_json(self.potential_path)
        if abs(potential.L - geom.L) > 1e-12:
            raise ConfigurationError(
                f"potential file has L={potential.L} but the run uses L={geom.L}"
            )
        return potential


def load_config_from_json(path: Path) -> dict:
    """Load a run configuration file; relative potential paths resolve against it."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file {path} does not exist")
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    if "L" in data and "geometry" not in data:
        # a bare potential file doubles as a run config
        data = {"geometry": {"L": data["L"], "R0": data.get("R0", 3.0)}, "potential_path": str(path.resolve())}
    potential = data.get("potential_path")
    if potential is not None and not Path(potential).is_absolute():
        data["potential_path"] = str(path.parent / potential)
    return data


@lru_cache
def get_run_config(path: str) -> RunConfig:
    """Get cached run configuration parsed from a JSON file."""
    return RunConfig(**load_config_from_json(Path(path)))
