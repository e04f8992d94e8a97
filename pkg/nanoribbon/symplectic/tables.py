"""
Biorthogonality Tables

Reproduces the table of q-values between the wave families at one energy,
the two-sided form on cut waves, and the energy-flux classification, each
entry with its expected value and deviation.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import propagating_modes
from nanoribbon.symplectic.cutoffs import QR, incoming_cut, outgoing_cut
from nanoribbon.symplectic.qform import DEFAULT_NQUAD, energy_flux, q_section_independence, q_value
from nanoribbon.waves.basis import WaveBasis, basis_for, key_name, standard_basis
from nanoribbon.waves.families import analytic_exponentials, oscillatory_wave, raw_exponential, threshold_waves

logger = logging.getLogger(__name__)

DEFAULT_SECTIONS = (-2.0, 0.0, 3.7)


@dataclass
class TableEntry:
    name: str
    expected: complex
    value: complex

    @property
    def deviation(self) -> float:
        return abs(self.value - self.expected)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": [self.expected.real, self.expected.imag],
            "value": [self.value.real, self.value.imag],
            "deviation": self.deviation,
        }


@dataclass
class BiorthogonalityReport:
    L: float
    omega: float
    N: Optional[int] = None
    eps: Optional[float] = None
    entries: List[TableEntry] = field(default_factory=list)
    section_deviation: float = 0.0

    def add(self, name: str, expected: complex, value: complex) -> None:
        self.entries.append(TableEntry(name, complex(expected), complex(value)))

    @property
    def max_deviation(self) -> float:
        return max((e.deviation for e in self.entries), default=0.0)

    def passed(self, tol: float = 1e-9) -> bool:
        return self.max_deviation < tol and self.section_deviation < tol

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "omega": self.omega,
            "N": self.N,
            "eps": self.eps,
            "max_deviation": self.max_deviation,
            "section_deviation": self.section_deviation,
            "entries": [e.to_dict() for e in self.entries],
        }


def _basis_block(report: BiorthogonalityReport, basis: WaveBasis, n_quad: int) -> None:
    for a in basis.keys:
        for b in basis.keys:
            expected = 1j * a[1] if a == b else 0.0
            value = q_value(basis[a], basis[b], 0.0, n_quad)
            report.add(f"q(w{key_name(a)}, w{key_name(b)})", expected, value)


def _cut_block(report: BiorthogonalityReport, basis: WaveBasis, R0: float, n_quad: int) -> None:
    R = R0 + 1.5
    cut = {}
    for key in basis.keys:
        cut[("W", key)] = outgoing_cut(basis[key], key[1], R0)
        cut[("V", key)] = incoming_cut(basis[key], key[1], R0)
    for (kind_a, a), fa in cut.items():
        for (kind_b, b), fb in cut.items():
            if kind_a != kind_b:
                expected = 0.0
            elif a != b:
                expected = 0.0
            else:
                expected = 1j if kind_a == "W" else -1j
            report.add(f"Q({kind_a}{key_name(a)}, {kind_b}{key_name(b)})", expected, QR(fa, fb, R, n_quad))


def biorthogonality_table(
    geom: RibbonGeometry,
    omega: Optional[float] = None,
    N: Optional[int] = None,
    eps: Optional[float] = None,
    n_quad: int = DEFAULT_NQUAD,
    sections: Sequence[float] = DEFAULT_SECTIONS,
    include_cut: bool = True,
) -> BiorthogonalityReport:
    """
    Full q-table at one energy.

    Either `omega` (away from thresholds) or (N, eps) is given. With (N, eps)
    the raw, analytic and normalised exponential values and the threshold
    pairing q(w_N^0, w_N^1) = -2L/omega_N are included.
    """
    if N is not None and eps is not None:
        basis = basis_for(geom, N, eps)
    else:
        basis = standard_basis(geom, omega)
    report = BiorthogonalityReport(L=geom.L, omega=basis.omega, N=N, eps=eps)
    _basis_block(report, basis, n_quad)

    modes = propagating_modes(geom, basis.omega)
    if modes:
        first = modes[0]
        raw = oscillatory_wave(geom, first.kappa_j, first.lambda_j, basis.omega, 1, normalized=False)
        report.add(
            "q(w1+, w1+) raw", 4j * geom.L * first.lambda_j / basis.omega, q_value(raw, raw, 0.0, n_quad)
        )

    if basis.exponential:
        ntd = basis.ntd
        lam, om = ntd.lambda_eps, ntd.omega_eps
        plus, minus = raw_exponential(geom, ntd, 1), raw_exponential(geom, ntd, -1)
        report.add("q(wN+, wN+) raw", 0.0, q_value(plus, plus, 0.0, n_quad))
        report.add("q(wN-, wN-) raw", 0.0, q_value(minus, minus, 0.0, n_quad))
        report.add("q(wN+, wN-) raw", 4j * geom.L * lam / om, q_value(plus, minus, 0.0, n_quad))
        report.add("q(wN-, wN+) raw", -4j * geom.L * lam / om, q_value(minus, plus, 0.0, n_quad))
        even, odd = analytic_exponentials(geom, ntd)
        report.add("q(w eps+, w eps+)", 0.0, q_value(even, even, 0.0, n_quad))
        report.add("q(w eps-, w eps-)", 0.0, q_value(odd, odd, 0.0, n_quad))
        report.add("q(w eps+, w eps-)", 2j * geom.L / om, q_value(even, odd, 0.0, n_quad))
        report.add("q(w eps-, w eps+)", 2j * geom.L / om, q_value(odd, even, 0.0, n_quad))

    if N is not None:
        w0, w1 = threshold_waves(geom, N)
        report.add("q(wN0, wN1)", -2.0 * geom.L / w0.omega, q_value(w0, w1, 0.0, n_quad))
        report.add("q(wN0, wN0)", 0.0, q_value(w0, w0, 0.0, n_quad))

    for key in basis.keys:
        w = basis[key]
        report.add(f"flux(w{key_name(key)})", key[1] * abs(w.omega) ** 2, energy_flux(w, 0.0, n_quad))

    if include_cut:
        _cut_block(report, basis, geom.R0, n_quad)

    deviations = [
        q_section_independence(basis[a], basis[b], sections, n_quad) for a in basis.keys for b in basis.keys
    ]
    report.section_deviation = float(max(deviations, default=0.0))
    logger.info(
        "biorthogonality table: %d entries, max deviation %.3e, section deviation %.3e",
        len(report.entries),
        report.max_deviation,
        report.section_deviation,
    )
    return report
