"""
Symmetries

The three symmetry maps of the ribbon problem and the negative-energy map,
acting on fields and on folded coefficient vectors.
"""

from typing import Tuple

import numpy as np

from nanoribbon.waves.fields import SpinorField, _as_arrays


class TransformedField(SpinorField):
    """
    Field obtained from `base` by a pointwise component map.

    The map is `out = mix @ f(base(x', y'))` where f is complex conjugation
    when `conjugate` is set, x' = x_sign * x and y' = y or L - y.
    """

    def __init__(
        self,
        base: SpinorField,
        mix: np.ndarray,
        conjugate: bool = False,
        reflect_x: bool = False,
        reflect_y: bool = False,
        omega_sign: int = 1,
        label: object = "transformed",
    ):
        super().__init__(base.geom, omega_sign * base.omega, label)
        self.base = base
        self.mix = np.asarray(mix, dtype=complex)
        self.conjugate = conjugate
        self.reflect_x = reflect_x
        self.reflect_y = reflect_y
        self.analytic = base.analytic

    def _source_points(self, x, y):
        x, y = _as_arrays(x, y)
        xs = -x if self.reflect_x else x
        ys = self.geom.L - y if self.reflect_y else y
        return xs, ys

    def _map(self, values: np.ndarray) -> np.ndarray:
        if self.conjugate:
            values = np.conj(values)
        return np.tensordot(self.mix, values, axes=(1, 0))

    def evaluate(self, x, y) -> np.ndarray:
        return self._map(self.base.evaluate(*self._source_points(x, y)))

    def gradient(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        dx, dy = self.base.gradient(*self._source_points(x, y))
        if self.reflect_x:
            dx = -dx
        if self.reflect_y:
            dy = -dy
        return self._map(dx), self._map(dy)


_SWAP_VALLEYS = np.array(
    [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex
)
_T2 = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=complex)


def t1(w: SpinorField) -> TransformedField:
    """(conj u', conj v', conj u, conj v)."""
    return TransformedField(w, _SWAP_VALLEYS, conjugate=True, label="T1")


def t2(w: SpinorField) -> TransformedField:
    """(v, -u, -v', u') evaluated at -x."""
    return TransformedField(w, _T2, reflect_x=True, label="T2")


def t3(w: SpinorField) -> TransformedField:
    """(e^{i2piL} conj u, -e^{i2piL} conj v, -conj u', conj v') evaluated at L - y."""
    phase = np.exp(2j * np.pi * w.geom.L)
    mix = np.diag([phase, -phase, -1.0, 1.0])
    return TransformedField(w, mix, conjugate=True, reflect_y=True, label="T3")


def negative_energy(w: SpinorField) -> TransformedField:
    """(u, -v, u', -v') solves the problem at -omega."""
    return TransformedField(w, np.diag([1.0, -1.0, 1.0, -1.0]), omega_sign=-1, label="negative-energy")


def t1_coefficients(c: np.ndarray) -> np.ndarray:
    """T1 on folded coefficients (a, b) -> (i conj a, -i conj b)."""
    size = c.shape[0] // 2
    out = np.conj(c).astype(complex)
    out[:size] *= 1j
    out[size:] *= -1j
    return out


def t3_coefficients(c: np.ndarray, kappas: np.ndarray, L: float) -> np.ndarray:
    """T3 on folded coefficients (a, b) -> (e^{i k L} conj a, -e^{i k L} conj b)."""
    size = c.shape[0] // 2
    phase = np.exp(1j * np.asarray(kappas) * L)
    out = np.conj(c).astype(complex)
    out[:size] *= phase
    out[size:] *= -phase
    return out
