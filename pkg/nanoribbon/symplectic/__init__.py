from nanoribbon.symplectic.cutoffs import QR, Cutoff, CutoffField, incoming_cut, outgoing_cut, smooth_step
from nanoribbon.symplectic.qform import (
    DEFAULT_NQUAD,
    QFormResult,
    energy_flux,
    q_section_independence,
    q_value,
    qform,
    qform_coefficients,
    qform_matrix,
)
from nanoribbon.symplectic.tables import BiorthogonalityReport, TableEntry, biorthogonality_table

__all__ = [
    "QR",
    "Cutoff",
    "CutoffField",
    "incoming_cut",
    "outgoing_cut",
    "smooth_step",
    "DEFAULT_NQUAD",
    "QFormResult",
    "energy_flux",
    "q_section_independence",
    "q_value",
    "qform",
    "qform_coefficients",
    "qform_matrix",
    "BiorthogonalityReport",
    "TableEntry",
    "biorthogonality_table",
]
