from typing import Dict

import pandas as pd

from ...classical.phase_space import h_cl
from ...husimi.evaluate import husimi_values
from ...states.mixtures import PairMixture, separation_family
from ...utils.parallel import ordered_map
from ..base_experiment import BaseExperiment


class SeparationExperiment(BaseExperiment):
    """Occupations of coherent pairs pulled apart on one energy shell.

    Ratios are taken against the D = 0 mixture, which is the single coherent state.
    """

    tag = "separate"
    title = "Coherent-Pair Separation"

    def _record(self, member: PairMixture) -> Dict:
        values = husimi_values(member.state, self.shell_entry[0].points)
        record = {"target": member.target, "D": member.distance, "epsilon_y": member.energy,
                  "sigma": member.sigma, "q_y": member.y.q, "p_y": member.y.p,
                  "Q_y": member.y.Q, "P_y": member.y.P}
        record.update(self.columns("atomic", self.atomic_occupations(member.state)))
        record.update(self.columns("shell", self.shell_occupations(values, self.shell_entry), True))
        if self.config.heatmap:
            self.write_heatmaps(member.state, "D", member.target,
                                {"state": f"{self.config.mode} coherent pair", "y": member.y.as_array()})
        self.report_progress(f"D={member.target:.3f}")
        return record

    def run(self) -> pd.DataFrame:
        cfg = self.config
        x = self.initial_point()
        epsilon = h_cl(x, self.params)
        grid = list(cfg.separations)
        if 0.0 not in grid:
            grid = [0.0] + grid

        def build_family():
            self.family = separation_family(x, cfg.mode, epsilon, grid, self.params,
                                            cfg.fock_basis(), hamiltonian=self.hamiltonian)

        self.initialize([("Placing partner states", build_family),
                         ("Sampling energy shell", lambda: setattr(self, "shell_entry", self.shell(epsilon))),
                         ("Building atomic grid", lambda: self.grid)])
        self.planned = len(self.family)
        table = pd.DataFrame(ordered_map(self._record, self.family, cfg.workers))
        reference = table.loc[table["target"] == 0.0].iloc[0]
        for alpha in cfg.alphas:
            for kind in ("atomic", "shell"):
                col = f"{kind}_{alpha:g}"
                table[f"{col}_ratio"] = table[col] / reference[col]
        return table

    def summary(self, table: pd.DataFrame) -> Dict:
        last = table.iloc[-1]
        out = {"mode": self.config.mode, "max_D": float(table["D"].max())}
        for alpha in self.config.alphas:
            for kind in ("atomic", "shell"):
                out[f"final_{kind}_{alpha:g}_ratio"] = float(last[f"{kind}_{alpha:g}_ratio"])
        sigmas = table["sigma"].dropna()
        if len(sigmas):
            out["sigma_mean"] = float(sigmas.mean())
        return out
