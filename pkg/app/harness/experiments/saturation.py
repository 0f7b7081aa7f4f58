from typing import Dict

import pandas as pd

from ...classical.phase_space import h_cl
from ...husimi.evaluate import husimi_values
from ...states.dynamics import energy_moments
from ...states.mixtures import saturate_bloch
from ..base_experiment import BaseExperiment


class SaturationExperiment(BaseExperiment):
    """Mixtures of n coherent states spread over the Bloch disk of one shell."""

    tag = "saturate"
    title = "Bloch-Disk Saturation"

    def _record(self, n: int) -> Dict:
        cfg = self.config
        saturation = saturate_bloch(n, self.epsilon, self.params, cfg.fock_basis(), seed=cfg.seed)
        state = saturation.state
        values = husimi_values(state, self.shell_entry[0].points, cfg.workers)
        record = {"n": int(n), "adjusted": saturation.adjusted,
                  "sigma": energy_moments(state, self.hamiltonian)[1]}
        record.update(self.columns("atomic", self.atomic_occupations(state)))
        record.update(self.columns("shell", self.shell_occupations(values, self.shell_entry), True))
        if self.config.heatmap:
            self.write_heatmaps(state, "n", n, {"state": "Bloch-disk mixture",
                                                "centroids": [x.as_array() for x in saturation.centroids]})
        self.report_progress(f"n={n}")
        return record

    def run(self) -> pd.DataFrame:
        self.epsilon = h_cl(self.initial_point(), self.params)

        def sample():
            self.shell_entry = self.shell(self.epsilon)

        self.initialize([("Building Hamiltonian", lambda: self.hamiltonian),
                         ("Sampling energy shell", sample),
                         ("Building atomic grid", lambda: self.grid)])
        self.planned = len(self.config.n_grid)
        # ensembles grow with n, so they run one after another and parallelize inside
        return pd.DataFrame([self._record(n) for n in self.config.n_grid])

    def summary(self, table: pd.DataFrame) -> Dict:
        last = table.iloc[-1]
        out = {"epsilon": self.epsilon, "largest_n": int(last["n"]),
               "adjusted_total": int(table["adjusted"].sum())}
        for alpha in self.config.alphas:
            out[f"final_atomic_{alpha:g}"] = float(last[f"atomic_{alpha:g}"])
            out[f"final_shell_{alpha:g}"] = float(last[f"shell_{alpha:g}"])
        return out
