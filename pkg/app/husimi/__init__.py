from .evaluate import (coherent_factors, coherent_overlaps, eigen_overlaps, husimi,
                       husimi_from_overlaps, husimi_values)
from .grid import ProjectionGrid, build_projection_grid, coherent_width
from .projections import (atomic_projection, bosonic_projection, projection_heatmap,
                          projection_on_grid, reduced_atomic_density, reduced_bosonic_density,
                          save_heatmap)

__all__ = [
    "coherent_factors", "coherent_overlaps", "eigen_overlaps", "husimi", "husimi_from_overlaps",
    "husimi_values", "ProjectionGrid", "build_projection_grid", "coherent_width",
    "atomic_projection", "bosonic_projection", "projection_heatmap", "projection_on_grid",
    "reduced_atomic_density", "reduced_bosonic_density", "save_heatmap",
]
