"""
Spinor Fields

Four-component fields (u, v, u', v') over the strip with pointwise evaluation
and gradients. Every field built from transverse modes uses the valley-folded
representation

    u = sum a_p(x) e^{i k_p y},      v = sum b_p(x) e^{i k_p y},
    u' = -i sum a_p(x) e^{-i k_p y}, v' = i sum b_p(x) e^{-i k_p y},

which satisfies both boundary-condition pairs for any coefficients a_p, b_p.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from nanoribbon.spectrum.geometry import RibbonGeometry

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
COMPONENTS = ("u", "v", "up", "vp")

ArrayLike = Union[float, np.ndarray]


def _as_arrays(x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return x, y


class SpinorField(ABC):
    """
    Evaluable field w = (u, v, u', v').

    `evaluate` returns an array of shape (4,) + broadcast shape of (x, y).
    Subclasses with closed-form derivatives override `gradient`; the default
    is a fourth-order central difference with step FD_STEP.
    """

    analytic = False

    def __init__(self, geom: RibbonGeometry, omega: float, label: object = "composite"):
        self.geom = geom
        self.omega = omega
        self.label = label

    @abstractmethod
    def evaluate(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        ...

    def __call__(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        return self.evaluate(x, y)

    def gradient(self, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """(d/dx w, d/dy w), each shaped like `evaluate`."""
        return finite_difference_gradient(self, x, y)

    def __add__(self, other: "SpinorField") -> "CompositeField":
        return CompositeField([(1.0, self), (1.0, other)])

    def __sub__(self, other: "SpinorField") -> "CompositeField":
        return CompositeField([(1.0, self), (-1.0, other)])

    def __rmul__(self, coef: complex) -> "CompositeField":
        return CompositeField([(coef, self)])

    def __repr__(self) -> str:
        return f"{type(self).__name__}(omega={self.omega!r}, label={self.label!r})"


def finite_difference_gradient(
    field: SpinorField, x: ArrayLike, y: ArrayLike, h: float = FD_STEP
) -> Tuple[np.ndarray, np.ndarray]:
    """Fourth-order central differences in x and y."""
    x, y = _as_arrays(x, y)

    def stencil(shift_x: float, shift_y: float) -> np.ndarray:
        return (
            -field.evaluate(x + 2 * shift_x, y + 2 * shift_y)
            + 8 * field.evaluate(x + shift_x, y + shift_y)
            - 8 * field.evaluate(x - shift_x, y - shift_y)
            + field.evaluate(x - 2 * shift_x, y - 2 * shift_y)
        ) / (12 * h)

    return stencil(h, 0.0), stencil(0.0, h)


def fold_components(
    a: np.ndarray, b: np.ndarray, e: np.ndarray, e_bar: np.ndarray
) -> np.ndarray:
    """Components from per-channel coefficients (channel axis last)."""
    u = np.sum(a * e, axis=-1)
    v = np.sum(b * e, axis=-1)
    up = -1j * np.sum(a * e_bar, axis=-1)
    vp = 1j * np.sum(b * e_bar, axis=-1)
    return np.stack([u, v, up, vp])


@dataclass(frozen=True)
class ModalTerm:
    """
    One channel term (a0 + a1 x, b0 + b1 x) e^{i mu x} with transverse number kappa.

    A free mode has a1 = b1 = 0 and b0 = -(mu + i kappa)/omega * a0.
    """

    kappa: float
    mu: complex
    a0: complex
    b0: complex
    a1: complex = 0.0
    b1: complex = 0.0
    x_ref: float = 0.0

    def scaled(self, coef: complex) -> "ModalTerm":
        return ModalTerm(
            self.kappa, self.mu, coef * self.a0, coef * self.b0, coef * self.a1, coef * self.b1, self.x_ref
        )

    def coefficients(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        phase = np.exp(1j * self.mu * (x - self.x_ref))
        return (self.a0 + self.a1 * x) * phase, (self.b0 + self.b1 * x) * phase

    def derivatives(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        phase = np.exp(1j * self.mu * (x - self.x_ref))
        da = (self.a1 + 1j * self.mu * (self.a0 + self.a1 * x)) * phase
        db = (self.b1 + 1j * self.mu * (self.b0 + self.b1 * x)) * phase
        return da, db


class ModalField(SpinorField):
    """Finite sum of modal terms; exact derivatives."""

    analytic = True

    def __init__(
        self,
        geom: RibbonGeometry,
        omega: float,
        terms: Sequence[ModalTerm],
        label: object = "composite",
    ):
        super().__init__(geom, omega, label)
        self.terms: List[ModalTerm] = list(terms)
        self._kappa = np.array([t.kappa for t in self.terms], dtype=float)

    def _channel_arrays(self, x: np.ndarray, derivative: bool = False):
        pairs = [t.derivatives(x) if derivative else t.coefficients(x) for t in self.terms]
        if not pairs:
            zero = np.zeros(x.shape + (0,), dtype=complex)
            return zero, zero
        a = np.stack([p[0] for p in pairs], axis=-1)
        b = np.stack([p[1] for p in pairs], axis=-1)
        return a, b

    def evaluate(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        x, y = _as_arrays(x, y)
        a, b = self._channel_arrays(x)
        e = np.exp(1j * y[..., None] * self._kappa)
        return fold_components(a, b, e, np.conj(e))

    def gradient(self, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        x, y = _as_arrays(x, y)
        a, b = self._channel_arrays(x)
        da, db = self._channel_arrays(x, derivative=True)
        e = np.exp(1j * y[..., None] * self._kappa)
        e_bar = np.conj(e)
        dx = fold_components(da, db, e, e_bar)
        ik = 1j * self._kappa
        dy = fold_components(a * ik, b * ik, e, -e_bar)
        return dx, dy

    def scaled(self, coef: complex) -> "ModalField":
        return ModalField(self.geom, self.omega, [t.scaled(coef) for t in self.terms], self.label)

    def combine(self, other: "ModalField", coef_self: complex = 1.0, coef_other: complex = 1.0, label=None):
        """Linear combination that stays a ModalField."""
        terms = [t.scaled(coef_self) for t in self.terms] + [t.scaled(coef_other) for t in other.terms]
        return ModalField(self.geom, self.omega, terms, label if label is not None else "composite")

    def coefficient_vector(self, x: float, kappas: np.ndarray, atol: float = 1e-9) -> np.ndarray:
        """
        Folded coefficients (a_1..a_K, b_1..b_K) at x in the channel basis `kappas`.

        Raises:
            ValueError: a term's kappa is not one of the channels
        """
        size = len(kappas)
        vec = np.zeros(2 * size, dtype=complex)
        xs = np.asarray(float(x))
        for term in self.terms:
            hits = np.flatnonzero(np.abs(kappas - term.kappa) < atol)
            if hits.size == 0:
                raise ValueError(f"kappa={term.kappa!r} not among the channels")
            a, b = term.coefficients(xs)
            vec[hits[0]] += a
            vec[size + hits[0]] += b
        return vec


class FoldedField(SpinorField):
    """
    Field given by coefficient functions a(x), b(x) over a fixed channel list.

    Callables map an x array to an array with a trailing channel axis.
    """

    def __init__(
        self,
        geom: RibbonGeometry,
        omega: float,
        kappas: Sequence[float],
        a_fn: Callable[[np.ndarray], np.ndarray],
        b_fn: Callable[[np.ndarray], np.ndarray],
        da_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        db_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        label: object = "folded",
    ):
        super().__init__(geom, omega, label)
        self.kappas = np.asarray(kappas, dtype=float)
        self.a_fn = a_fn
        self.b_fn = b_fn
        self.da_fn = da_fn
        self.db_fn = db_fn
        self.analytic = da_fn is not None and db_fn is not None

    @classmethod
    def from_samples(
        cls,
        geom: RibbonGeometry,
        omega: float,
        kappas: Sequence[float],
        x_nodes: np.ndarray,
        coefficients: np.ndarray,
        label: object = "folded",
    ) -> "FoldedField":
        """Cubic-spline interpolant of sampled coefficients (n, 2K) on x_nodes."""
        size = len(kappas)
        spline = CubicSpline(x_nodes, coefficients, axis=0)
        deriv = spline.derivative()
        return cls(
            geom,
            omega,
            kappas,
            a_fn=lambda x: spline(x)[..., :size],
            b_fn=lambda x: spline(x)[..., size:],
            da_fn=lambda x: deriv(x)[..., :size],
            db_fn=lambda x: deriv(x)[..., size:],
            label=label,
        )

    def evaluate(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        x, y = _as_arrays(x, y)
        e = np.exp(1j * y[..., None] * self.kappas)
        return fold_components(self.a_fn(x), self.b_fn(x), e, np.conj(e))

    def gradient(self, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        if not self.analytic:
            return finite_difference_gradient(self, x, y)
        x, y = _as_arrays(x, y)
        e = np.exp(1j * y[..., None] * self.kappas)
        e_bar = np.conj(e)
        a, b = self.a_fn(x), self.b_fn(x)
        ik = 1j * self.kappas
        dx = fold_components(self.da_fn(x), self.db_fn(x), e, e_bar)
        dy = fold_components(a * ik, b * ik, e, -e_bar)
        return dx, dy


class FunctionField(SpinorField):
    """Field from an arbitrary callable; finite-difference gradient."""

    def __init__(
        self,
        geom: RibbonGeometry,
        omega: float,
        fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
        label: object = "composite",
    ):
        super().__init__(geom, omega, label)
        self.fn = fn

    def evaluate(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        x, y = _as_arrays(x, y)
        return np.asarray(self.fn(x, y), dtype=complex)


class CompositeField(SpinorField):
    """Linear combination sum c_i w_i of fields at a common energy."""

    def __init__(self, parts: Sequence[Tuple[complex, SpinorField]], label: object = "composite"):
        if not parts:
            raise ValueError("a composite field needs at least one part")
        first = parts[0][1]
        super().__init__(first.geom, first.omega, label)
        self.parts = list(parts)
        self.analytic = all(field.analytic for _, field in self.parts)

    def evaluate(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        return sum(coef * field.evaluate(x, y) for coef, field in self.parts)

    def gradient(self, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        if not self.analytic:
            return finite_difference_gradient(self, x, y)
        dx = 0
        dy = 0
        for coef, field in self.parts:
            gx, gy = field.gradient(x, y)
            dx = dx + coef * gx
            dy = dy + coef * gy
        return dx, dy


class ZeroField(SpinorField):
    analytic = True

    def evaluate(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        x, _ = _as_arrays(x, y)
        return np.zeros((4,) + x.shape, dtype=complex)

    def gradient(self, x: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        zero = self.evaluate(x, y)
        return zero, zero.copy()


def apply_dirac(w: SpinorField, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """
    Dirac operator applied to w at the given points.

        (i d_x + d_y) v,  (i d_x - d_y) u,  (-i d_x + d_y) v',  (-i d_x - d_y) u'
    """
    dx, dy = w.gradient(x, y)
    return np.stack(
        [
            1j * dx[1] + dy[1],
            1j * dx[0] - dy[0],
            -1j * dx[3] + dy[3],
            -1j * dx[2] - dy[2],
        ]
    )


def dirac_residual(w: SpinorField, x: ArrayLike, y: ArrayLike, potential=None) -> float:
    """max |(D + P - omega) w| over the points; `potential` is a callable P(x, y) or None."""
    x, y = _as_arrays(x, y)
    values = w.evaluate(x, y)
    residual = apply_dirac(w, x, y) - w.omega * values
    if potential is not None:
        residual = residual + potential(x, y) * values
    return float(np.max(np.abs(residual))) if residual.size else 0.0


def bc_residual(w: SpinorField, x_samples: ArrayLike) -> float:
    """
    Largest modulus of the four boundary expressions over the x samples.

        u - i u' and -i v + v' at y = 0,
        e^{-i 2 pi L} u - i u' and -i e^{-i 2 pi L} v + v' at y = L.
    """
    x = np.atleast_1d(np.asarray(x_samples, dtype=float))
    L = w.geom.L
    phase = np.exp(-2j * np.pi * L)
    bottom = w.evaluate(x, np.zeros_like(x))
    top = w.evaluate(x, np.full_like(x, L))
    residuals = [
        bottom[0] - 1j * bottom[2],
        -1j * bottom[1] + bottom[3],
        phase * top[0] - 1j * top[2],
        -1j * phase * top[1] + top[3],
    ]
    return float(max(np.max(np.abs(r)) for r in residuals))


def pointwise_dot(w: np.ndarray, w_tilde: np.ndarray) -> np.ndarray:
    """w . conj(w_tilde) summed over the four components."""
    return np.sum(w * np.conj(w_tilde), axis=0)
