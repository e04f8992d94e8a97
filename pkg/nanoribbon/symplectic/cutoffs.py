"""
Cutoff Waves

Smooth x-cutoffs chi_+ (0 left of R0, 1 right of R0 + 1) and chi_-(x) = chi_+(-x),
the cut waves W and V built from them, and the two-sided form
Q_R = q_R - q_{-R}.
"""

from typing import Tuple

import numpy as np

from nanoribbon.symplectic.qform import DEFAULT_NQUAD, q_value
from nanoribbon.waves.fields import SpinorField, _as_arrays

TRANSITION_WIDTH = 1.0


def _psi(t: np.ndarray) -> np.ndarray:
    safe = np.where(t > 0, t, 1.0)
    return np.where(t > 0, np.exp(-1.0 / safe), 0.0)


def smooth_step(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """C-infinity step from 0 (t <= 0) to 1 (t >= 1) and its derivative."""
    t = np.asarray(t, dtype=float)
    f = _psi(t)
    g = _psi(1.0 - t)
    total = f + g
    value = f / total
    inner = (t > 0) & (t < 1)
    ts = np.where(inner, t, 0.5)
    deriv = np.where(inner, f * g * (1.0 / ts ** 2 + 1.0 / (1.0 - ts) ** 2) / total ** 2, 0.0)
    return value, deriv


class Cutoff:
    """chi_+ (side = +1) or chi_- (side = -1) with the ramp on R0 <= |x| <= R0 + 1."""

    def __init__(self, R0: float, side: int, width: float = TRANSITION_WIDTH):
        if side not in (1, -1):
            raise ValueError(f"side must be +1 or -1, got {side!r}")
        self.R0 = R0
        self.side = side
        self.width = width

    def __call__(self, x):
        value, _ = smooth_step((self.side * np.asarray(x, dtype=float) - self.R0) / self.width)
        return value

    def derivative(self, x):
        _, deriv = smooth_step((self.side * np.asarray(x, dtype=float) - self.R0) / self.width)
        return self.side * deriv / self.width


class CutoffField(SpinorField):
    """chi(x) * base(x, y)."""

    def __init__(self, base: SpinorField, cutoff: Cutoff, label: object = "cutoff"):
        super().__init__(base.geom, base.omega, label)
        self.base = base
        self.cutoff = cutoff
        self.analytic = base.analytic

    def evaluate(self, x, y) -> np.ndarray:
        x, y = _as_arrays(x, y)
        return self.cutoff(x) * self.base.evaluate(x, y)

    def gradient(self, x, y):
        x, y = _as_arrays(x, y)
        values = self.base.evaluate(x, y)
        dx, dy = self.base.gradient(x, y)
        chi = self.cutoff(x)
        return chi * dx + self.cutoff.derivative(x) * values, chi * dy


def outgoing_cut(w: SpinorField, tau: int, R0: float) -> CutoffField:
    """W^tau: chi_+ w^+ for tau = +1, chi_- w^- for tau = -1."""
    return CutoffField(w, Cutoff(R0, tau), label=("W", w.label))


def incoming_cut(w: SpinorField, tau: int, R0: float) -> CutoffField:
    """V^tau: chi_- w^+ for tau = +1, chi_+ w^- for tau = -1."""
    return CutoffField(w, Cutoff(R0, -tau), label=("V", w.label))


def QR(w: SpinorField, wt: SpinorField, R: float, n_quad: int = DEFAULT_NQUAD) -> complex:
    """Q_R(w, wt) = q_R(w, wt) - q_{-R}(w, wt)."""
    return q_value(w, wt, R, n_quad) - q_value(w, wt, -R, n_quad)
