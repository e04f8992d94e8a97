from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import (
    DispersionRow,
    ModeSpec,
    NearThresholdData,
    ThresholdEntry,
    ThresholdTable,
    dispersion_curves,
    near_threshold,
    propagating_modes,
    spacing_bound,
    strip_gamma,
    threshold_count_below,
    thresholds,
    wavenumbers,
)

__all__ = [
    "RibbonGeometry",
    "DispersionRow",
    "ModeSpec",
    "NearThresholdData",
    "ThresholdEntry",
    "ThresholdTable",
    "dispersion_curves",
    "near_threshold",
    "propagating_modes",
    "spacing_bound",
    "strip_gamma",
    "threshold_count_below",
    "thresholds",
    "wavenumbers",
]
