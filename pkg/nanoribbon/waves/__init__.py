from nanoribbon.waves.basis import WaveBasis, augmented_basis, basis_for, key_name, standard_basis
from nanoribbon.waves.families import (
    WaveFamily,
    WaveLabel,
    analytic_exponentials,
    evanescent_wave,
    limit_exponential,
    make_wave,
    mode_term,
    negative_energy_partner,
    normalized_exponential,
    oscillatory_wave,
    raw_exponential,
    threshold_waves,
)
from nanoribbon.waves.fields import (
    CompositeField,
    FoldedField,
    FunctionField,
    ModalField,
    ModalTerm,
    SpinorField,
    ZeroField,
    apply_dirac,
    bc_residual,
    dirac_residual,
    pointwise_dot,
)
from nanoribbon.waves.identities import NormIdentityResult, gaussian_mode_sum, norm_identity_gap
from nanoribbon.waves.symmetries import negative_energy, t1, t1_coefficients, t2, t3, t3_coefficients

__all__ = [
    "WaveBasis",
    "augmented_basis",
    "basis_for",
    "key_name",
    "standard_basis",
    "WaveFamily",
    "WaveLabel",
    "analytic_exponentials",
    "evanescent_wave",
    "limit_exponential",
    "make_wave",
    "mode_term",
    "negative_energy_partner",
    "normalized_exponential",
    "oscillatory_wave",
    "raw_exponential",
    "threshold_waves",
    "CompositeField",
    "FoldedField",
    "FunctionField",
    "ModalField",
    "ModalTerm",
    "SpinorField",
    "ZeroField",
    "apply_dirac",
    "bc_residual",
    "dirac_residual",
    "pointwise_dot",
    "NormIdentityResult",
    "gaussian_mode_sum",
    "norm_identity_gap",
    "negative_energy",
    "t1",
    "t1_coefficients",
    "t2",
    "t3",
    "t3_coefficients",
]
