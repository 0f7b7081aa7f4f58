from typing import Dict

import numpy as np
import pandas as pd

from ..base_experiment import BaseExperiment


class DiagExperiment(BaseExperiment):
    """Diagonalize the truncated Hamiltonian and tabulate the converged spectrum."""

    tag = "diag"
    title = "Dicke Spectrum"

    def run(self) -> pd.DataFrame:
        spectrum = self.spectrum
        return pd.DataFrame({
            "k": np.arange(spectrum.size),
            "energy": spectrum.eigenvalues,
            "epsilon": spectrum.scaled_energies,
            "converged": spectrum.converged,
        })

    def summary(self, table: pd.DataFrame) -> Dict:
        converged = table["converged"].to_numpy()
        # converged states below the first unconverged one
        leading = int(np.argmin(converged)) if not converged.all() else int(converged.size)
        return {
            "dim": self.config.basis_spec().dim,
            "n_states": int(table.shape[0]),
            "converged": int(converged.sum()),
            "leading_converged": leading,
            "epsilon_min": float(table["epsilon"].min()) if len(table) else None,
            "epsilon_leading_max": float(table["epsilon"].iloc[leading - 1]) if leading else None,
        }
