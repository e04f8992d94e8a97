from nanoribbon.scattering.born import BornResult, born_smatrix, overlap_matrix
from nanoribbon.scattering.channels import ChannelSet, channel_set
from nanoribbon.scattering.criterion import (
    CriterionValue,
    ScanDip,
    ScanRow,
    TrappedModeProfile,
    TrapScan,
    criterion_matrix,
    trap_scan,
    trapped_criterion,
    trapped_mode_profile,
)
from nanoribbon.scattering.smatrix import AugmentedScatteringMatrix
from nanoribbon.scattering.solver import (
    AsymptoticDecomposition,
    ScatteringSolution,
    ScatteringSolver,
    SolveDiagnostics,
    solve_scattering,
)

__all__ = [
    "BornResult",
    "born_smatrix",
    "overlap_matrix",
    "ChannelSet",
    "channel_set",
    "CriterionValue",
    "ScanDip",
    "ScanRow",
    "TrappedModeProfile",
    "TrapScan",
    "criterion_matrix",
    "trap_scan",
    "trapped_criterion",
    "trapped_mode_profile",
    "AugmentedScatteringMatrix",
    "AsymptoticDecomposition",
    "ScatteringSolution",
    "ScatteringSolver",
    "SolveDiagnostics",
    "solve_scattering",
]
