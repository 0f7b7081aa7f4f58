from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ...classical.phase_space import h_cl
from ...model.spectrum import Spectrum
from ...renyi.occupations import energy_profile, save_occupations
from ...states.coherent import coherent_fock_coefficients
from ...states.dynamics import energy_moments
from ...states.state import PureState, QuantumState
from ...utils.errors import ConvergenceError
from ...utils.logger import get_logger
from ..base_experiment import BaseExperiment

logger = get_logger(__name__)


class ProfileExperiment(BaseExperiment):
    """Energy profiles C_eps of eigenstates and of the initial coherent state."""

    tag = "profile"
    title = "Husimi Energy Profiles"

    def _eigenstates(self, spectrum: Spectrum) -> List[int]:
        if self.config.profile_states:
            return list(self.config.profile_states)
        converged = spectrum.converged_indices()
        if converged.size == 0:
            raise ConvergenceError("no converged eigenstate to profile")
        return [int(converged[np.argmin(np.abs(spectrum.scaled_energies[converged] - 1.0))])]

    def _states(self) -> List[Tuple[str, QuantumState, float, float]]:
        """(label, state, centre energy, energy width) of every profiled state."""
        spectrum = self.spectrum
        basis = self.config.fock_basis()
        states = []
        for k in self._eigenstates(spectrum):
            if not spectrum.converged[k]:
                raise ConvergenceError(f"eigenstate k={k} is not converged")
            state = PureState(spectrum.eigenvectors[:, k], basis=basis)
            states.append((f"eigenstate_{k}", state, float(spectrum.scaled_energies[k]), 0.0))
        x = self.initial_point()
        coherent = PureState(coherent_fock_coefficients(x, basis), basis=basis)
        mean, sigma = energy_moments(coherent, self.hamiltonian)
        logger.info(f"coherent state: h_cl={h_cl(x, self.params):.4f}, "
                    f"<H>/j={mean:.4f}, sigma={sigma:.4f}")
        states.append(("coherent", coherent, float(mean), float(sigma)))
        return states

    def run(self) -> pd.DataFrame:
        grid = list(self.config.profile_grid)
        self.initialize([("Diagonalizing Hamiltonian", lambda: self.spectrum),
                         ("Sampling energy shells", lambda: [self.shell(e) for e in grid])])
        entries = [self.shell(e) for e in grid]
        shells = [sample for sample, _ in entries]
        densities = [nu for _, nu in entries]
        frames, results, descriptors = [], [], []
        self.states = self._states()
        self.planned = len(self.states)
        for label, state, centre, width in self.states:
            frame = energy_profile(state, grid, shells, self.config.workers, self.config.alphas,
                                   densities, self.params)
            for epsilon, result in frame.attrs.pop("occupations"):
                results.append(result)
                descriptors.append({"state": label, "epsilon": epsilon})
            frame.insert(0, "state", label)
            frame["centre"] = centre
            frame["width"] = width
            frames.append(frame)
            self.report_progress(label)
        save_occupations(results, Path(self.config.out_dir) / f"{self.tag}_occupations", descriptors)
        return pd.concat(frames, ignore_index=True)

    def summary(self, table: pd.DataFrame) -> Dict:
        out = {}
        for label, frame in table.groupby("state", sort=False):
            peak = frame.loc[frame["c_eps"].idxmax()]
            out[label] = {"centre": float(frame["centre"].iloc[0]),
                          "width": float(frame["width"].iloc[0]),
                          "peak_epsilon": float(peak["epsilon"]),
                          "peak_c_eps": float(peak["c_eps"])}
        return out
