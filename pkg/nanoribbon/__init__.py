"""
Nanoribbon

Continuum Dirac model of an armchair graphene nanoribbon: thresholds, waves,
the q-form, augmented scattering matrices, trapped-mode detection and the
synthesis of trapping potentials.
"""

__version__ = "0.1.0"

# Version of the artifact formats (potential, S-matrix and report JSON, CSV columns)
ARTIFACT_VERSION = "1"
