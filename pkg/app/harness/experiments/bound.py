from typing import Dict

import numpy as np
import pandas as pd

from ...classical.config import MonteCarloConfig
from ...classical.sampling import block_generator
from ...model.config import FockBasisSpec
from ...renyi.volumes import coherent_lower_bound, coherent_volume, renyi_volume_phase_space
from ...states.state import PureState
from ...utils.errors import ConfigError
from ...utils.logger import get_logger
from ...utils.parallel import ordered_map
from ..base_experiment import BaseExperiment

logger = get_logger(__name__)


class BoundExperiment(BaseExperiment):
    """Phase-space Renyi volumes of random pure states against the coherent-state floor."""

    tag = "bound"
    title = "Coherent-State Volume Floor"

    def random_state(self, i: int) -> PureState:
        """Gaussian random pure state i in a small Fock basis, drawn from stream (seed, i)."""
        basis = FockBasisSpec(self.params.j, self.config.bound_n_max)
        rng = block_generator(self.config.seed, i)
        vector = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        return PureState(vector / np.linalg.norm(vector), basis=basis)

    def floor(self, alpha: float) -> float:
        """Coherent-state floor of V_alpha; the exact coherent volume outside the bound's range."""
        hbar = self.params.hbar_eff
        try:
            return coherent_lower_bound(alpha, hbar)
        except ConfigError as exc:
            logger.warning(f"{exc}; comparing against the exact coherent-state volume")
            return coherent_volume(alpha, hbar)

    def _record(self, i: int) -> Dict:
        cfg = self.config
        state = self.random_state(i)
        # volume draws are keyed apart from the state streams
        mc = MonteCarloConfig(n_samples=cfg.bound_samples, n_batches=cfg.n_batches,
                              seed=cfg.seed + 1 + i)
        record = {"state": i}
        for alpha in cfg.alphas:
            result = renyi_volume_phase_space(state, alpha, mc, self.params)
            floor = self.floors[alpha]
            record[f"volume_{alpha:g}"] = result.value
            record[f"volume_{alpha:g}_stderr"] = result.stderr
            record[f"floor_{alpha:g}"] = floor
            record[f"violation_{alpha:g}"] = bool(result.value < floor - 3 * result.stderr)
        self.report_progress(f"state {i}")
        return record

    def run(self) -> pd.DataFrame:
        self.floors = {a: self.floor(a) for a in self.config.alphas}
        self.planned = self.config.n_random
        return pd.DataFrame(ordered_map(self._record, range(self.config.n_random),
                                        self.config.workers))

    def summary(self, table: pd.DataFrame) -> Dict:
        out = {"n_random": int(len(table))}
        for alpha in self.config.alphas:
            out[f"floor_{alpha:g}"] = self.floors[alpha]
            out[f"violations_{alpha:g}"] = int(table[f"violation_{alpha:g}"].sum())
            out[f"min_volume_{alpha:g}"] = float(table[f"volume_{alpha:g}"].min())
        return out
