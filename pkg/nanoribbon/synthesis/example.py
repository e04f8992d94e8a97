"""Reference design potential Phi at L = 1.33."""

from nanoribbon.models import BumpTerm, PotentialSpec

EXAMPLE_L = 1.33
EXAMPLE_R0 = 5.8


def example_potential(y_center: float = 0.67, delta: float = 1e-2) -> PotentialSpec:
    """
    e^{-((y - yc)/0.2)^2} (0.54 e^{-(x + 0.14)^2} - e^{-(x + 0.32)^2} + 0.54 e^{-(x + 0.49)^2}).

    The centre 0.67 is L/2 = 0.665 rounded; pass y_center=0.665 for
    the exactly reflection-symmetric variant.
    """
    terms = [
        BumpTerm(amp=0.54, x0=-0.14, sx=1.0, y0=y_center, sy=0.2),
        BumpTerm(amp=-1.0, x0=-0.32, sx=1.0, y0=y_center, sy=0.2),
        BumpTerm(amp=0.54, x0=-0.49, sx=1.0, y0=y_center, sy=0.2),
    ]
    return PotentialSpec(L=EXAMPLE_L, R0=EXAMPLE_R0, delta=delta, terms=terms)
