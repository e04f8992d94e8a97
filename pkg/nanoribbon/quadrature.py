"""
Quadrature

Composite Gauss-Legendre rules on intervals and tensor grids.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=64)
def _reference_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(a: float, b: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [a, b]."""
    nodes, weights = _reference_rule(int(n))
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * nodes, half * weights


def composite_gauss_legendre(
    a: float, b: float, panels: int, nodes_per_panel: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite rule with equal panels on [a, b].

    Args:
        a, b: interval end points
        panels: number of equal sub-intervals
        nodes_per_panel: Gauss-Legendre order on each panel

    Returns:
        (nodes, weights), each of length panels * nodes_per_panel
    """
    edges = np.linspace(a, b, int(panels) + 1)
    ref_x, ref_w = _reference_rule(int(nodes_per_panel))
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * ref_x[None, :]).ravel()
    weights = (half[:, None] * ref_w[None, :]).ravel()
    return nodes, weights


class TensorGrid:
    """Product Gauss-Legendre grid over a box [x0, x1] x [y0, y1]."""

    def __init__(
        self,
        x_range: Tuple[float, float],
        y_range: Tuple[float, float],
        panels: Tuple[int, int] = (16, 4),
        nodes_per_panel: int = 16,
    ):
        self.x_range = (float(x_range[0]), float(x_range[1]))
        self.y_range = (float(y_range[0]), float(y_range[1]))
        self.panels = (int(panels[0]), int(panels[1]))
        self.nodes_per_panel = int(nodes_per_panel)
        self.x, self.wx = composite_gauss_legendre(*self.x_range, self.panels[0], self.nodes_per_panel)
        self.y, self.wy = composite_gauss_legendre(*self.y_range, self.panels[1], self.nodes_per_panel)
        self.X, self.Y = np.meshgrid(self.x, self.y, indexing="ij")
        self.W = np.outer(self.wx, self.wy)

    def integrate(self, values: np.ndarray):
        """Integral of samples taken on (X, Y); the last two axes are the grid."""
        return np.tensordot(values, self.W, axes=([-2, -1], [0, 1]))

    def refined(self) -> "TensorGrid":
        """Same box with twice the panels in each direction."""
        return TensorGrid(
            self.x_range,
            self.y_range,
            (2 * self.panels[0], 2 * self.panels[1]),
            self.nodes_per_panel,
        )
