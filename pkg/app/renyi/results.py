from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

import numpy as np


@dataclass(frozen=True)
class OccupationResult:
    """Renyi volume or occupation of a state.

    Attributes:
        value (float): Occupation L_alpha, or the volume itself for unbounded references.
        alpha (float): Renyi order.
        reference_volume (float): Volume of the reference region (inf when unbounded).
        normalization (float): C or C_eps, the Husimi mass on the region.
        stderr (float): Standard error; 0 for deterministic quadrature.
        volume (Optional[float]): Occupied volume V_alpha.
        config (Dict): Grid or Monte Carlo settings used.
    """
    value: float
    alpha: float
    reference_volume: float
    normalization: float
    stderr: float = 0.0
    volume: Optional[float] = None
    config: Dict = field(default_factory=dict)

    @property
    def bounded(self) -> bool:
        return bool(np.isfinite(self.reference_volume))

    def within_bounds(self, n_sigma: float = 3.0) -> bool:
        """0 < value <= 1 + n_sigma * stderr for bounded references."""
        if not self.bounded:
            return self.value > 0
        return 0 < self.value <= 1 + n_sigma * self.stderr + 1e-12

    def to_record(self, descriptor: Optional[Dict] = None) -> Dict:
        record = asdict(self)
        if not self.bounded:
            record["reference_volume"] = None
        if descriptor:
            record["state"] = descriptor
        return record
