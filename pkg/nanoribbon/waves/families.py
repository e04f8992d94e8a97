"""
Wave Families

Free solutions of the ribbon problem: oscillatory waves for real wavenumbers,
the two threshold solutions, and the exponential pair that branches off a
threshold just below it, in raw, analytic and normalised forms.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from nanoribbon.errors import RegimeMismatchError, RibbonValidationError
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import (
    NearThresholdData,
    near_threshold,
    propagating_modes,
    thresholds,
)
from nanoribbon.waves.fields import ModalField, ModalTerm

logger = logging.getLogger(__name__)


class WaveFamily(str, Enum):
    OSCILLATORY = "oscillatory"
    OSCILLATORY_NORMALIZED = "oscillatory_normalized"
    THRESHOLD0 = "threshold0"
    THRESHOLD1 = "threshold1"
    NEAR_EXP_RAW = "near_exp_raw"
    NEAR_EXP_ANALYTIC_PLUS = "near_exp_analytic_plus"
    NEAR_EXP_ANALYTIC_MINUS = "near_exp_analytic_minus"
    NEAR_EXP_NORMALIZED = "near_exp_normalized"


THRESHOLD_FAMILIES = {WaveFamily.THRESHOLD0, WaveFamily.THRESHOLD1}
NEAR_FAMILIES = {
    WaveFamily.NEAR_EXP_RAW,
    WaveFamily.NEAR_EXP_ANALYTIC_PLUS,
    WaveFamily.NEAR_EXP_ANALYTIC_MINUS,
    WaveFamily.NEAR_EXP_NORMALIZED,
}
DIRECTED_FAMILIES = {
    WaveFamily.OSCILLATORY,
    WaveFamily.OSCILLATORY_NORMALIZED,
    WaveFamily.NEAR_EXP_RAW,
    WaveFamily.NEAR_EXP_NORMALIZED,
}


@dataclass(frozen=True)
class WaveLabel:
    family: WaveFamily
    j: int
    tau: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", WaveFamily(self.family))
        if self.tau not in (1, -1):
            raise RibbonValidationError(f"tau must be +1 or -1, got {self.tau!r}")
        if self.j < 1:
            raise RibbonValidationError(f"mode index must be >= 1, got {self.j}")

    def __str__(self) -> str:
        sign = "+" if self.tau > 0 else "-"
        if self.family in DIRECTED_FAMILIES:
            return f"{self.family.value}[{self.j}{sign}]"
        return f"{self.family.value}[{self.j}]"


def sign(value: float) -> int:
    if value == 0:
        raise RibbonValidationError("kappa = 0 only occurs for integer 2L")
    return 1 if value > 0 else -1


def mode_term(kappa: float, mu: complex, omega: float, amplitude: complex = 1.0, x_ref: float = 0.0) -> ModalTerm:
    """e^{i mu x}(e, c e, -i e_bar, i c e_bar) with c = -(mu + i kappa)/omega."""
    c = -(mu + 1j * kappa) / omega
    return ModalTerm(kappa=kappa, mu=mu, a0=amplitude, b0=amplitude * c, x_ref=x_ref)


def oscillatory_wave(
    geom: RibbonGeometry,
    kappa: float,
    lam: float,
    omega: float,
    tau: int,
    normalized: bool = True,
    j: int = 1,
) -> ModalField:
    """w_j^tau for a real wavenumber lam > 0; normalised by sqrt(omega)/(2 sqrt(L lam))."""
    if lam <= 0:
        raise RegimeMismatchError(WaveFamily.OSCILLATORY.value, f"lambda={lam!r} is not positive")
    scale = math.sqrt(omega) / (2.0 * math.sqrt(geom.L * lam)) if normalized else 1.0
    family = WaveFamily.OSCILLATORY_NORMALIZED if normalized else WaveFamily.OSCILLATORY
    term = mode_term(kappa, tau * lam, omega, amplitude=scale)
    return ModalField(geom, omega, [term], WaveLabel(family, j, tau))


def threshold_waves(geom: RibbonGeometry, N: int):
    """(w_N^0, w_N^1) at omega = omega_N."""
    entry = thresholds(geom, N)[N]
    kappa, omega = entry.kappa, entry.omega
    s = sign(kappa)
    w0_term = ModalTerm(kappa=kappa, mu=0.0, a0=1.0, b0=-1j * s)
    w1_term = ModalTerm(kappa=kappa, mu=0.0, a0=0.0, b0=1j / omega, a1=1.0, b1=-1j * s)
    w0 = ModalField(geom, omega, [w0_term], WaveLabel(WaveFamily.THRESHOLD0, N))
    w1 = ModalField(geom, omega, [w1_term], WaveLabel(WaveFamily.THRESHOLD1, N))
    return w0, w1


def raw_exponential(geom: RibbonGeometry, ntd: NearThresholdData, tau: int) -> ModalField:
    """w_N^tau = e^{tau i lambda_eps x}(...): tau = + decays to the right."""
    term = mode_term(ntd.kappa_N, tau * ntd.lambda_eps, ntd.omega_eps)
    return ModalField(geom, ntd.omega_eps, [term], WaveLabel(WaveFamily.NEAR_EXP_RAW, ntd.N, tau))


def analytic_exponentials(geom: RibbonGeometry, ntd: NearThresholdData):
    """
    (w^{eps+}, w^{eps-}) = ((w+ + w-)/2, (w+ - w-)/(2 lambda_eps)).

    Both are analytic in eps and tend to w_N^0 and i w_N^1 at the threshold.
    """
    plus = raw_exponential(geom, ntd, 1)
    minus = raw_exponential(geom, ntd, -1)
    lam = ntd.lambda_eps
    even = plus.combine(minus, 0.5, 0.5, WaveLabel(WaveFamily.NEAR_EXP_ANALYTIC_PLUS, ntd.N))
    odd = plus.combine(
        minus, 1.0 / (2.0 * lam), -1.0 / (2.0 * lam), WaveLabel(WaveFamily.NEAR_EXP_ANALYTIC_MINUS, ntd.N)
    )
    return even, odd


def normalized_exponential(geom: RibbonGeometry, ntd: NearThresholdData, tau: int) -> ModalField:
    """(w^{eps+} + tau w^{eps-}) / cal_N, normalised so that q = tau i."""
    even, odd = analytic_exponentials(geom, ntd)
    return even.combine(
        odd,
        1.0 / ntd.cal_N,
        tau / ntd.cal_N,
        WaveLabel(WaveFamily.NEAR_EXP_NORMALIZED, ntd.N, tau),
    )


def limit_exponential(geom: RibbonGeometry, N: int, tau: int) -> ModalField:
    """eps -> 0 limit of the normalised pair: (w_N^0 + tau i w_N^1) / (2 sqrt(L/omega_N))."""
    w0, w1 = threshold_waves(geom, N)
    norm = 2.0 * math.sqrt(geom.L / w0.omega)
    return w0.combine(w1, 1.0 / norm, tau * 1j / norm, WaveLabel(WaveFamily.NEAR_EXP_NORMALIZED, N, tau))


def make_wave(
    label: WaveLabel,
    geom: RibbonGeometry,
    omega: Optional[float] = None,
    N: Optional[int] = None,
    eps: Optional[float] = None,
) -> ModalField:
    """
    Construct any wave family as an evaluable field.

    Args:
        label: family, mode index j and direction tau
        geom: ribbon geometry
        omega: energy for oscillatory waves away from a threshold
        N: threshold index for threshold and near-threshold families
        eps: distance below omega_N (near-threshold families, or oscillatory
            waves at omega_N - eps)

    Returns:
        ModalField satisfying the free Dirac system and both boundary conditions

    Raises:
        RegimeMismatchError: the family is not defined at the requested energy
    """
    family = label.family
    if family in THRESHOLD_FAMILIES:
        if N is None:
            raise RegimeMismatchError(family.value, "threshold waves need the threshold index N")
        if eps not in (None, 0, 0.0):
            raise RegimeMismatchError(family.value, f"threshold waves exist only at eps = 0, got {eps!r}")
        table = thresholds(geom, N)
        if omega is not None and abs(omega - table[N].omega) > 1e-12:
            raise RegimeMismatchError(
                family.value, f"omega={omega!r} is not the threshold omega_{N}={table[N].omega!r}"
            )
        w0, w1 = threshold_waves(geom, N)
        return w0 if family is WaveFamily.THRESHOLD0 else w1

    if family in NEAR_FAMILIES:
        if N is None or eps is None or eps <= 0:
            raise RegimeMismatchError(family.value, "exponential waves need N and eps > 0")
        ntd = near_threshold(geom, N, eps)
        if family is WaveFamily.NEAR_EXP_RAW:
            return raw_exponential(geom, ntd, label.tau)
        if family is WaveFamily.NEAR_EXP_NORMALIZED:
            return normalized_exponential(geom, ntd, label.tau)
        even, odd = analytic_exponentials(geom, ntd)
        return even if family is WaveFamily.NEAR_EXP_ANALYTIC_PLUS else odd

    if omega is None:
        if N is None or eps is None:
            raise RegimeMismatchError(family.value, "oscillatory waves need omega or (N, eps)")
        omega = near_threshold(geom, N, eps).omega_eps
    modes = propagating_modes(geom, omega)
    if label.j > len(modes):
        raise RegimeMismatchError(
            family.value, f"only {len(modes)} propagating modes at omega={omega!r}, asked for j={label.j}"
        )
    mode = modes[label.j - 1]
    return oscillatory_wave(
        geom,
        mode.kappa_j,
        mode.lambda_j,
        omega,
        label.tau,
        normalized=family is WaveFamily.OSCILLATORY_NORMALIZED,
        j=label.j,
    )


def negative_energy_partner(w: ModalField) -> ModalField:
    """(u, -v, u', -v') solves the problem at -omega."""
    terms = [ModalTerm(t.kappa, t.mu, t.a0, -t.b0, t.a1, -t.b1, t.x_ref) for t in w.terms]
    return ModalField(w.geom, -w.omega, terms, w.label)


def evanescent_wave(geom: RibbonGeometry, kappa: float, omega: float, direction: int, x_ref: float) -> ModalField:
    """
    Evanescent mode of channel kappa (|kappa| > omega) with unit amplitude at x_ref.

    direction = +1 decays towards +infinity, -1 towards -infinity.
    """
    gamma = math.sqrt((kappa - omega) * (kappa + omega))
    mu = complex(0.0, direction * gamma)
    return ModalField(geom, omega, [mode_term(kappa, mu, omega, x_ref=x_ref)], "evanescent")


def wavenumber(kappa: float, omega: float) -> complex:
    """sqrt(omega^2 - kappa^2) on the principal branch (imaginary part >= 0)."""
    return cmath.sqrt((omega - kappa) * (omega + kappa))
