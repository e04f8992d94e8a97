from nanoribbon.synthesis.example import example_potential
from nanoribbon.synthesis.fixed_point import SynthesisResult, fixed_point_eta, reduced_entries, synthesize
from nanoribbon.synthesis.index_set import Part, SynthesisIndex, SynthesisIndexSet, synthesis_index_set
from nanoribbon.synthesis.moments import (
    ClosedFormCheck,
    MomentSolve,
    closed_form,
    closed_form_checks,
    default_bumps,
    gram_matrix,
    moment_matrix,
    solve_phi,
    solve_psis,
    upsilon,
)

__all__ = [
    "example_potential",
    "SynthesisResult",
    "fixed_point_eta",
    "reduced_entries",
    "synthesize",
    "Part",
    "SynthesisIndex",
    "SynthesisIndexSet",
    "synthesis_index_set",
    "ClosedFormCheck",
    "MomentSolve",
    "closed_form",
    "closed_form_checks",
    "default_bumps",
    "gram_matrix",
    "moment_matrix",
    "solve_phi",
    "solve_psis",
    "upsilon",
]
