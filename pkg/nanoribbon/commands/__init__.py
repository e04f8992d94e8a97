from nanoribbon.commands.checks import QCheckCommand, VerifyIdentitiesCommand
from nanoribbon.commands.scattering import BornCommand, SMatrixCommand, TrapScanCommand
from nanoribbon.commands.spectrum import DispersionCommand, ThresholdsCommand
from nanoribbon.commands.synthesis import SynthesizeCommand
from nanoribbon.commands.waves import WaveCommand

__all__ = [
    "QCheckCommand",
    "VerifyIdentitiesCommand",
    "BornCommand",
    "SMatrixCommand",
    "TrapScanCommand",
    "DispersionCommand",
    "ThresholdsCommand",
    "SynthesizeCommand",
    "WaveCommand",
]
