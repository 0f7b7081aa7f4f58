from typing import Dict

import pandas as pd

from ...classical.config import MonteCarloConfig
from ...classical.phase_space import ground_state_energy
from ...classical.shell import density_of_states, finite_difference_density, weyl_count
from ...utils.formatting import format_number
from ..base_experiment import BaseExperiment


class DosExperiment(BaseExperiment):
    """Shell-sampled density of states against the finite-difference volume oracle."""

    tag = "dos"
    title = "Semiclassical Density of States"

    def config_items(self) -> Dict[str, object]:
        items = super().config_items()
        items["Budgets"] = (f"{format_number(self.config.dos_samples)} shell / "
                            f"{format_number(self.config.fd_samples)} box draws")
        return items

    def _mc(self, n_samples: int) -> MonteCarloConfig:
        cfg = self.config
        return MonteCarloConfig(n_samples=n_samples, n_batches=cfg.n_batches, seed=cfg.seed,
                                workers=cfg.workers)

    def _record(self, epsilon: float) -> Dict:
        nu = density_of_states(epsilon, self.params, self._mc(self.config.dos_samples))
        oracle = finite_difference_density(epsilon, self.params, self._mc(self.config.fd_samples),
                                           self.config.fd_delta)
        count = weyl_count(epsilon, self.params, self._mc(self.config.fd_samples))
        self.report_progress(f"eps={epsilon:.3f}")
        return {"epsilon": epsilon, "nu": nu.value, "nu_stderr": nu.stderr,
                "nu_fd": oracle.value, "nu_fd_stderr": oracle.stderr,
                "rel_diff": abs(nu.value - oracle.value) / oracle.value if oracle.value else None,
                "weyl_count": count.value, "weyl_stderr": count.stderr}

    def run(self) -> pd.DataFrame:
        self.planned = len(self.config.epsilon_grid)
        # each estimate already spreads its blocks over the workers
        return pd.DataFrame([self._record(float(e)) for e in self.config.epsilon_grid])

    def summary(self, table: pd.DataFrame) -> Dict:
        e_gs, _ = ground_state_energy(self.params)
        return {"ground_state_energy": e_gs, "max_rel_diff": float(table["rel_diff"].max()),
                "fd_delta": self.config.fd_delta}
