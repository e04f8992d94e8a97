"""
Cross-Section Form

The sesquilinear, anti-Hermitian form

    q_a(w, w~) = -i int_0^L [conj(u~) v + conj(v~) u - conj(u~') v' - conj(v~') u'] dy

evaluated on the section x = a. For two solutions of the same problem it does
not depend on a.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from nanoribbon.quadrature import gauss_legendre
from nanoribbon.waves.fields import SpinorField

logger = logging.getLogger(__name__)

DEFAULT_NQUAD = 128


@dataclass
class QFormResult:
    value: complex
    section_x: float
    quadrature_points: int

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "section_x": self.section_x,
            "quadrature_points": self.quadrature_points,
        }


def qform_density(w: np.ndarray, wt: np.ndarray) -> np.ndarray:
    """Integrand of q (without the -i factor) from sampled components."""
    return np.conj(wt[0]) * w[1] + np.conj(wt[1]) * w[0] - np.conj(wt[2]) * w[3] - np.conj(wt[3]) * w[2]


def qform(w: SpinorField, wt: SpinorField, a: float = 0.0, n_quad: int = DEFAULT_NQUAD) -> QFormResult:
    """q_a(w, wt) by n_quad-point Gauss-Legendre quadrature over (0, L)."""
    y, weights = gauss_legendre(0.0, w.geom.L, n_quad)
    x = np.full_like(y, float(a))
    density = qform_density(w.evaluate(x, y), wt.evaluate(x, y))
    value = complex(-1j * np.dot(weights, density))
    return QFormResult(value=value, section_x=float(a), quadrature_points=n_quad)


def q_value(w: SpinorField, wt: SpinorField, a: float = 0.0, n_quad: int = DEFAULT_NQUAD) -> complex:
    return qform(w, wt, a, n_quad).value


def q_section_independence(
    w: SpinorField, wt: SpinorField, sections: Sequence[float], n_quad: int = DEFAULT_NQUAD
) -> float:
    """Largest |q_a - q_b| over all pairs of sections."""
    values = np.array([q_value(w, wt, a, n_quad) for a in sections])
    if values.size < 2:
        return 0.0
    return float(np.max(np.abs(values[:, None] - values[None, :])))


def qform_coefficients(c: np.ndarray, ct: np.ndarray, L: float) -> complex:
    """
    q of two folded coefficient vectors (a, b) on one section.

    Transverse orthogonality reduces the integral to -2iL ct^H Sigma c, where
    Sigma swaps the a and b halves.
    """
    size = c.shape[0] // 2
    swapped = np.concatenate([c[size:], c[:size]])
    return complex(-2j * L * np.vdot(ct, swapped))


def qform_matrix(columns: np.ndarray, L: float) -> np.ndarray:
    """Matrix G[m, n] = q(columns[:, n], columns[:, m]) for a set of coefficient vectors."""
    size = columns.shape[0] // 2
    swapped = np.concatenate([columns[size:], columns[:size]], axis=0)
    return -2j * L * (columns.conj().T @ swapped)


def energy_flux(w: SpinorField, a: float = 0.0, n_quad: int = DEFAULT_NQUAD) -> float:
    """-i |omega|^2 q(w, w): positive for rightward, negative for leftward transport."""
    q = q_value(w, w, a, n_quad)
    return float(np.real(-1j * abs(w.omega) ** 2 * q))
