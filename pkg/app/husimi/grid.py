from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..utils.errors import ConfigError, ResolutionError

MIN_RESOLUTION = 8
DEFAULT_HALF_WIDTH = 6.0
PLANES = ("atomic", "bosonic")


def coherent_width(j: float) -> float:
    return float(np.sqrt(2 / j))


@dataclass(frozen=True)
class ProjectionGrid:
    """Quadrature nodes on one coordinate plane.

    Attributes:
        plane (str): "atomic" for (Q, P) on the Bloch disk, "bosonic" for (q, p).
        nodes (np.ndarray): (M, 2) node coordinates.
        weights (np.ndarray): Positive quadrature weights summing to the region's area.
        extent (Dict): Region descriptor and node counts.
    """
    plane: str
    nodes: np.ndarray
    weights: np.ndarray
    extent: Dict = field(default_factory=dict)

    @property
    def area(self) -> float:
        return float(np.sum(self.weights))

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


def _disk_grid(n_radial: int, n_angle: int) -> ProjectionGrid:
    # Gauss-Legendre in u = Z^2 on [0, 4], dQ dP = du dphi / 2
    x, w = np.polynomial.legendre.leggauss(n_radial)
    u = 2 * (x + 1)
    radial_weights = w
    phi = 2 * np.pi * np.arange(n_angle) / n_angle
    radius = np.sqrt(u)
    R, PHI = np.meshgrid(radius, phi, indexing="ij")
    nodes = np.column_stack([(R * np.cos(PHI)).ravel(), (R * np.sin(PHI)).ravel()])
    weights = np.repeat(radial_weights, n_angle) * (2 * np.pi / n_angle)
    return ProjectionGrid("atomic", nodes, weights,
                          {"radius": 2.0, "n_radial": n_radial, "n_angle": n_angle})


def _box_grid(n_axis: int, half_width: float) -> ProjectionGrid:
    x, w = np.polynomial.legendre.leggauss(n_axis)
    x, w = half_width * x, half_width * w
    X, Y = np.meshgrid(x, x, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])
    return ProjectionGrid("bosonic", nodes, np.outer(w, w).ravel(),
                          {"half_width": half_width, "n_axis": n_axis})


def build_projection_grid(plane: str, resolution: int, j: float,
                          extent: Optional[float] = None) -> ProjectionGrid:
    """Tensor quadrature on the atomic disk or a bosonic box.

    The disk uses Gauss-Legendre nodes in Z^2 (exact for the polynomial radial
    dependence of atomic projections once there are more than 2j nodes) and a
    uniform trapezoid in angle. The bosonic plane uses a Gauss-Legendre tensor
    product on [-extent, extent]^2.

    Args:
        plane (str): "atomic" or "bosonic".
        resolution (int): Nodes per coherent-state width sqrt(2/j).
        j (float): Pseudo-spin length.
        extent (Optional[float]): Bosonic box half-width. Defaults to 6.

    Raises:
        ResolutionError: resolution below 8 nodes per coherent width.
    """
    if plane not in PLANES:
        raise ConfigError(f"plane must be one of {PLANES}, got {plane!r}")
    if resolution < MIN_RESOLUTION:
        raise ResolutionError(f"resolution {resolution} below {MIN_RESOLUTION} nodes per coherent width")
    width = coherent_width(j)
    if plane == "atomic":
        n_radial = max(int(np.ceil(resolution * 2 / width)), int(round(2 * j)) + 2)
        n_angle = max(int(np.ceil(resolution * 4 * np.pi / width)), int(round(4 * j)) + 2)
        return _disk_grid(n_radial, n_angle)
    half_width = DEFAULT_HALF_WIDTH if extent is None else float(extent)
    if half_width <= 0:
        raise ConfigError("bosonic extent must be positive")
    return _box_grid(int(np.ceil(resolution * 2 * half_width / width)), half_width)
