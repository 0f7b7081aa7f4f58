from typing import Dict

import numpy as np
import pandas as pd

from ...husimi.evaluate import husimi_values
from ...states.state import PureState
from ...utils.parallel import ordered_map
from ..base_experiment import BaseExperiment


class EigstatsExperiment(BaseExperiment):
    """Atomic and shell occupations of every eigenstate in an energy or index window.

    Each eigenstate is measured on its own shell, epsilon = epsilon_k.
    """

    tag = "eigstats"
    title = "Eigenstate Occupations"

    def _record(self, k: int) -> Dict:
        spectrum = self.spectrum
        state = PureState(spectrum.eigenvectors[:, k], basis=self.config.fock_basis())
        eps = float(spectrum.scaled_energies[k])
        shell = self.shell(eps, cache=False)
        values = husimi_values(state, shell[0].points)
        record = {"k": int(k), "epsilon": eps}
        record.update(self.columns("atomic", self.atomic_occupations(state)))
        record.update(self.columns("shell", self.shell_occupations(values, shell), with_stderr=True))
        self.report_progress(f"eigenstate {k}")
        return record

    def run(self) -> pd.DataFrame:
        self.initialize([("Diagonalizing Hamiltonian", lambda: self.spectrum),
                         ("Building atomic grid", lambda: self.grid)])
        indices = self.window_indices()
        self.planned = len(indices)
        records = ordered_map(self._record, indices.tolist(), self.config.workers)
        columns = ["k", "epsilon"]
        for alpha in self.config.alphas:
            columns += [f"atomic_{alpha:g}", f"shell_{alpha:g}", f"shell_{alpha:g}_stderr"]
        return pd.DataFrame(records, columns=columns)

    def summary(self, table: pd.DataFrame) -> Dict:
        out = {"n_states": int(len(table))}
        for alpha in self.config.alphas:
            for kind in ("atomic", "shell"):
                col = f"{kind}_{alpha:g}"
                out[f"mean_{col}"] = float(table[col].mean()) if len(table) else None
                out[f"std_{col}"] = float(table[col].std(ddof=1)) if len(table) > 1 else None
        return out

    def extra_tables(self, table: pd.DataFrame) -> Dict[str, pd.DataFrame]:
        edges = np.linspace(0.0, 1.0, self.config.n_bins + 1)
        hist = {"bin_low": edges[:-1], "bin_high": edges[1:]}
        cdf = []
        for alpha in self.config.alphas:
            for kind in ("atomic", "shell"):
                col = f"{kind}_{alpha:g}"
                values = table[col].to_numpy(dtype=float)
                hist[col] = np.histogram(np.clip(values, 0.0, 1.0), bins=edges)[0]
                ordered = np.sort(values)
                cdf.append(pd.DataFrame({"quantity": col, "value": ordered,
                                         "cumulative": np.arange(1, ordered.size + 1) / max(ordered.size, 1)}))
        cumulative = (pd.concat(cdf, ignore_index=True) if cdf
                      else pd.DataFrame(columns=["quantity", "value", "cumulative"]))
        return {"histogram": pd.DataFrame(hist), "cdf": cumulative}
