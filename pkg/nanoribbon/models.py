"""
Data Models

Pydantic models for the JSON artifacts: the potential description read and
written by the CLI, and the scattering-matrix and synthesis reports.
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from nanoribbon.quadrature import gauss_legendre

SUP_GRID = (801, 201)


class BumpTerm(BaseModel):
    """amp * exp(-((x - x0)/sx)^2) * exp(-((y - y0)/sy)^2)."""

    model_config = ConfigDict(extra="forbid")

    amp: float
    x0: float
    sx: float = Field(gt=0)
    y0: float
    sy: float = Field(gt=0)

    def x_extent(self, tol: float) -> float:
        """Half-width around x0 beyond which |amp| e^{-((x-x0)/sx)^2} < tol."""
        if abs(self.amp) <= tol:
            return 0.0
        return self.sx * math.sqrt(math.log(abs(self.amp) / tol))

    def x_factor(self, x: np.ndarray, tol: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        reach = self.x_extent(tol)
        values = self.amp * np.exp(-(((x - self.x0) / self.sx) ** 2))
        return np.where(np.abs(x - self.x0) <= reach, values, 0.0)

    def y_factor(self, y: np.ndarray) -> np.ndarray:
        return np.exp(-(((np.asarray(y, dtype=float) - self.y0) / self.sy) ** 2))


class PotentialSpec(BaseModel):
    """
    Real potential delta * P(x, y) with P a sum of separable Gaussian bumps.

    `truncation_tol` is not serialised, so files written by `to_json` are read
    back unchanged.
    """

    model_config = ConfigDict(extra="forbid")

    L: float = Field(gt=0)
    R0: float = Field(gt=0)
    delta: float = 0.0
    terms: List[BumpTerm] = Field(default_factory=list)
    truncation_tol: float = Field(default=1e-12, gt=0, exclude=True)

    @field_validator("terms")
    @classmethod
    def _finite_terms(cls, terms: List[BumpTerm]) -> List[BumpTerm]:
        for term in terms:
            if not all(math.isfinite(v) for v in (term.amp, term.x0, term.sx, term.y0, term.sy)):
                raise ValueError("potential terms must be finite")
        return terms

    @property
    def is_zero(self) -> bool:
        return self.delta == 0.0 or all(t.amp == 0.0 for t in self.terms)

    def extent(self) -> float:
        """Half-width in x of the truncated support (0 for an empty potential)."""
        reaches = [abs(t.x0) + t.x_extent(self.truncation_tol) for t in self.terms if t.amp != 0.0]
        return max(reaches, default=0.0)

    def support_box(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        R = max(self.extent(), 1e-12)
        return (-R, R), (0.0, self.L)

    def x_profiles(self, x: np.ndarray) -> np.ndarray:
        """Truncated x-factors of every term, shape (terms,) + x.shape."""
        x = np.asarray(x, dtype=float)
        if not self.terms:
            return np.zeros((0,) + x.shape)
        return np.stack([t.x_factor(x, self.truncation_tol) for t in self.terms])

    def evaluate(self, x, y) -> np.ndarray:
        """P(x, y) without the amplitude delta."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        total = np.zeros(x.shape)
        for term in self.terms:
            total = total + term.x_factor(x, self.truncation_tol) * term.y_factor(y)
        return total

    def transverse_matrices(self, kappas: Sequence[float], n_quad: int = 128) -> np.ndarray:
        """
        H_t[q, p] = (1/L) int_0^L h_t(y) cos((k_p - k_q) y) dy for every term.

        These couple the folded channels: the cross-section coupling matrix at
        x is sum_t g_t(x) H_t with g_t the truncated x-factor.
        """
        kappas = np.asarray(kappas, dtype=float)
        y, w = gauss_legendre(0.0, self.L, n_quad)
        diff = kappas[None, :] - kappas[:, None]
        cosines = np.cos(diff[..., None] * y)
        if not self.terms:
            return np.zeros((0, len(kappas), len(kappas)))
        return np.stack([cosines @ (w * t.y_factor(y)) / self.L for t in self.terms])

    def sup_norm(self, grid: Tuple[int, int] = SUP_GRID) -> float:
        if not self.terms:
            return 0.0
        (x0, x1), (y0, y1) = self.support_box()
        X, Y = np.meshgrid(np.linspace(x0, x1, grid[0]), np.linspace(y0, y1, grid[1]), indexing="ij")
        centers_x = np.array([t.x0 for t in self.terms])
        centers_y = np.array([t.y0 for t in self.terms])
        peak = np.abs(self.evaluate(centers_x, np.clip(centers_y, 0.0, self.L)))
        return float(max(np.max(np.abs(self.evaluate(X, Y))), np.max(peak)))

    def is_y_symmetric(self, tol: float = 1e-12) -> bool:
        return all(abs(t.y0 - self.L / 2.0) <= tol for t in self.terms)

    def scaled(self, factor: float) -> "PotentialSpec":
        terms = [t.model_copy(update={"amp": t.amp * factor}) for t in self.terms]
        return self.model_copy(update={"terms": terms})

    def with_delta(self, delta: float) -> "PotentialSpec":
        return self.model_copy(update={"delta": float(delta)})

    def normalized(self) -> "PotentialSpec":
        """Rescale so that sup|P| <= 1, folding the factor into delta."""
        sup = self.sup_norm()
        if sup <= 1.0:
            return self.model_copy()
        return self.scaled(1.0 / sup).with_delta(self.delta * sup)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, source: Union[str, Path]) -> "PotentialSpec":
        """Parse a potential from a JSON string or file path."""
        text = source
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            text = Path(source).read_text()
        return cls.model_validate_json(text)

    @classmethod
    def zero(cls, L: float, R0: float = 1.0) -> "PotentialSpec":
        return cls(L=L, R0=R0, delta=0.0, terms=[])


class ComplexMatrix(BaseModel):
    real: List[List[float]]
    imag: List[List[float]]

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "ComplexMatrix":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(real=matrix.real.tolist(), imag=matrix.imag.tolist())

    def to_array(self) -> np.ndarray:
        return np.array(self.real) + 1j * np.array(self.imag)


class SMatrixArtifact(BaseModel):
    """Serialized scattering matrix with its context and checks."""

    L: float
    N: int
    eps: float
    omega: float
    delta: float
    augmented: bool
    labels: List[str]
    S: ComplexMatrix
    checks: Dict[str, float] = Field(default_factory=dict)
    criterion: Optional[Dict[str, float]] = None


class SynthesisArtifact(BaseModel):
    """Report written next to a synthesized potential."""

    L: float
    N: int
    eps: float
    sigma: float
    delta_design: float
    delta: float
    index_set: List[str]
    active: List[str]
    moments_phi: Dict[str, float]
    gram_spectrum: List[float]
    iterations: int
    history: List[float]
    eta: Dict[str, float]
    psi: Dict[str, List[float]] = Field(default_factory=dict)
    final_sigma_min: float
    closed_form_ratios: Dict[str, float] = Field(default_factory=dict)


def write_json(path: Union[str, Path], payload: Union[BaseModel, dict]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, BaseModel):
        path.write_text(payload.model_dump_json(indent=2))
    else:
        path.write_text(json.dumps(payload, indent=2))
