from typing import Dict

import numpy as np
import pandas as pd

from ...classical.phase_space import h_cl
from ...husimi.evaluate import eigen_overlaps, husimi_from_overlaps
from ...states.dynamics import eigen_coefficients, energy_moments
from ...states.state import PureState, TimeAveragedState
from ...utils.logger import get_logger
from ...utils.parallel import ordered_map
from ..base_experiment import BaseExperiment

logger = get_logger(__name__)


class EvolutionExperiment(BaseExperiment):
    """Occupations of an evolving coherent state and of its running time average.

    Shell Husimi values come from one overlap matrix <x|E_k> on the shell
    sample, reused for every time and averaging window.
    """

    tag = "evolve"
    title = "Coherent-State Dynamics"

    def _prepare(self):
        spectrum = self.spectrum
        x = self.initial_point()
        self.epsilon = h_cl(x, self.params)
        self.coefficients = eigen_coefficients(x, spectrum)
        self.support = TimeAveragedState(self.coefficients, spectrum, 0.0).support
        self.shell_entry = self.shell(self.epsilon)
        self.overlaps = eigen_overlaps(self.shell_entry[0].points, spectrum, self.support,
                                       self.config.workers)
        initial = PureState(self.coefficients, spectrum=spectrum)
        self.moments = energy_moments(initial, spectrum)
        logger.info(f"initial state: epsilon={self.moments[0]:.4f}, sigma={self.moments[1]:.4f}, "
                    f"{self.support.size} eigencomponents")

    def _record(self, t: float) -> Dict:
        spectrum = self.spectrum
        phases = np.exp(-1j * spectrum.eigenvalues * t)
        evolved = PureState(self.coefficients * phases, spectrum=spectrum)
        averaged = TimeAveragedState(self.coefficients, spectrum, t)

        values = husimi_from_overlaps(self.overlaps, evolved.coefficients[self.support])
        avg_values = husimi_from_overlaps(self.overlaps, averaged.coefficients, averaged.kernel())
        record = {"t": float(t)}
        record.update(self.columns("atomic", self.atomic_occupations(evolved)))
        record.update(self.columns("shell", self.shell_occupations(values, self.shell_entry), True))
        record.update(self.columns("atomic_avg", self.atomic_occupations(averaged)))
        record.update(self.columns("shell_avg", self.shell_occupations(avg_values, self.shell_entry), True))
        if any(np.isclose(t, mark) for mark in self.config.heatmap_times):
            point = {"point": self.config.point}
            self.write_heatmaps(evolved, "t", t, {"state": "evolved coherent", **point})
            self.write_heatmaps(averaged, "avgT", t, {"state": "time-averaged coherent", **point})
        self.report_progress(f"t={t:.2f}")
        return record

    def run(self) -> pd.DataFrame:
        self.initialize([("Diagonalizing Hamiltonian", lambda: self.spectrum),
                         ("Expanding coherent state", self._prepare),
                         ("Building atomic grid", lambda: self.grid)])
        times = np.linspace(0.0, self.config.t_max, self.config.n_times)
        self.planned = len(times)
        return pd.DataFrame(ordered_map(self._record, times.tolist(), self.config.workers))

    def summary(self, table: pd.DataFrame) -> Dict:
        tail = table.iloc[-max(1, len(table) // 4):]
        out = {"epsilon": self.epsilon, "mean_epsilon": self.moments[0], "sigma": self.moments[1]}
        for alpha in self.config.alphas:
            for kind in ("atomic", "shell"):
                col = f"{kind}_{alpha:g}"
                out[f"initial_{col}"] = float(table[col].iloc[0])
                out[f"plateau_{col}"] = float(tail[col].mean())
                out[f"final_{kind}_avg_{alpha:g}"] = float(table[f"{kind}_avg_{alpha:g}"].iloc[-1])
        return out
