import threading
import time
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..classical.phase_space import PhasePoint
from ..classical.shell import ShellSample, sample_shell
from ..husimi.grid import ProjectionGrid, build_projection_grid
from ..husimi.projections import projection_heatmap, projection_on_grid, save_heatmap
from ..model import build_hamiltonian, diagonalize, load_spectrum, save_spectrum
from ..model.spectrum import Spectrum
from ..renyi.occupations import occupation_atomic, occupation_shell
from ..renyi.results import OccupationResult
from ..utils.errors import ConvergenceError
from ..utils.formatting import format_time, print_header, progress_bar
from ..utils.logger import get_logger, success
from .config import ExperimentConfig
from .export import write_outputs

logger = get_logger(__name__)


class BaseExperiment(ABC):
    """Shared plumbing of the pipelines: banner, cached spectrum, shells and outputs.

    Subclasses set ``tag`` and ``title`` and implement ``run`` and ``summary``.
    """

    tag = "experiment"
    title = "Experiment"

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.params = config.model
        self.start_time: Optional[float] = None
        self.completed = 0
        self.planned = 0
        self._spectrum: Optional[Spectrum] = None
        self._hamiltonian = None
        self._shells: Dict[float, Tuple[ShellSample, float]] = {}
        self._grid: Optional[ProjectionGrid] = None
        self._lock = threading.Lock()

    def config_items(self) -> Dict[str, object]:
        p = self.params
        return {
            "Model": f"omega={p.omega}, omega0={p.omega0}, gamma={p.gamma}, j={p.j:g}",
            "Basis": f"{self.config.basis} (truncation {self.config.n_max})",
            "Alphas": ", ".join(f"{a:g}" for a in self.config.alphas),
            "Seed": self.config.seed,
            "Workers": self.config.workers,
            "Output": self.config.out_dir,
        }

    def initialize(self, steps: List[Tuple[str, Callable[[], object]]]) -> None:
        """Run preparation steps, reporting each one with a progress bar."""
        for i, (label, action) in enumerate(steps, start=1):
            logger.info(f"{label}...")
            started = time.time()
            action()
            logger.info(f"{label}: {progress_bar(i / len(steps))} ({format_time(time.time() - started)})")

    def report_progress(self, label: str) -> None:
        with self._lock:
            self.completed += 1
            done = self.completed
        if self.planned:
            logger.info(f"{label} {progress_bar(done / self.planned)}")

    @property
    def hamiltonian(self):
        if self._hamiltonian is None:
            self._hamiltonian = build_hamiltonian(self.params, self.config.basis_spec())
        return self._hamiltonian

    @property
    def spectrum(self) -> Spectrum:
        if self._spectrum is None:
            self._spectrum = self._load_or_diagonalize()
        return self._spectrum

    def _load_or_diagonalize(self) -> Spectrum:
        cfg = self.config
        if cfg.load_spectrum:
            spectrum = load_spectrum(cfg.load_spectrum)
            if spectrum.params != self.params or spectrum.basis != cfg.basis_spec():
                logger.warning("stored spectrum was built for a different model or basis")
            logger.info(f"loaded {spectrum.size} eigenstates from {cfg.load_spectrum}")
            return spectrum
        basis = cfg.basis_spec()
        logger.info(f"diagonalizing {cfg.basis} basis of dimension {basis.dim}")
        spectrum = diagonalize(self.hamiltonian, params=self.params, basis=basis,
                               e_cutoff=cfg.e_cutoff, dense_limit=cfg.dense_limit,
                               use_parity=cfg.use_parity, guard_fraction=cfg.guard_fraction,
                               threshold=cfg.threshold)
        logger.info(f"{spectrum.converged_count} of {spectrum.size} eigenstates converged")
        if cfg.save_spectrum:
            path = save_spectrum(spectrum, cfg.save_spectrum)
            logger.info(f"spectrum written to {path}")
        return spectrum

    @property
    def grid(self) -> ProjectionGrid:
        if self._grid is None:
            self._grid = build_projection_grid("atomic", self.config.resolution, self.params.j)
        return self._grid

    def shell(self, epsilon: float, cache: bool = True) -> Tuple[ShellSample, float]:
        """Shell sample at epsilon and the density of states it implies."""
        key = float(epsilon)
        if key in self._shells:
            return self._shells[key]
        mc = self.config.shell_mc()
        sample = sample_shell(key, mc.n_samples, mc.seed, self.params, mc)
        entry = (sample, sample.volume().value / (4 * np.pi ** 2))
        if cache:
            self._shells[key] = entry
        return entry

    def window_indices(self) -> np.ndarray:
        """Eigenstate indices selected by ``k_window`` or ``energy_window``.

        Raises:
            ConvergenceError: the window contains unconverged eigenstates.
        """
        spectrum = self.spectrum
        if self.config.k_window is not None:
            first, last = self.config.k_window
            idx = np.arange(max(first, 0), min(last + 1, spectrum.size))
        else:
            low, high = self.config.energy_window
            eps = spectrum.scaled_energies
            idx = np.flatnonzero((eps > low) & (eps < high))
        unconverged = idx[~spectrum.converged[idx]]
        if unconverged.size:
            raise ConvergenceError(f"{unconverged.size} unconverged eigenstates in the window "
                                   f"(first k={unconverged[0]})")
        return idx

    def atomic_occupations(self, state) -> Dict[float, OccupationResult]:
        values = projection_on_grid(state, self.grid)
        return {a: occupation_atomic(values, a, self.grid, self.params) for a in self.config.alphas}

    def shell_occupations(self, values: np.ndarray, shell: Tuple[ShellSample, float]
                          ) -> Dict[float, OccupationResult]:
        """Shell occupations from Husimi values precomputed at the shell points."""
        sample, nu = shell
        epsilon = sample.epsilon
        return {a: occupation_shell(values, epsilon, a, sample, nu, self.params)
                for a in self.config.alphas}

    @staticmethod
    def columns(prefix: str, results: Dict[float, OccupationResult],
                with_stderr: bool = False) -> Dict[str, float]:
        """Flatten per-alpha results into ``<prefix>_<alpha>`` record fields."""
        record = {}
        for alpha, result in results.items():
            record[f"{prefix}_{alpha:g}"] = result.value
            if with_stderr:
                record[f"{prefix}_{alpha:g}_stderr"] = result.stderr
        return record

    def initial_point(self) -> PhasePoint:
        return PhasePoint.from_array(self.config.point)

    def write_heatmaps(self, state, key: str, value: float, metadata: Dict) -> List[Path]:
        """Atomic and bosonic projection rasters of ``state``.

        Files are named ``<tag>_heatmap_<plane>_<key><value>`` with the decimal
        point of ``value`` written as "p", e.g. ``evolve_heatmap_atomic_t2p5``.
        """
        label = key + f"{value:g}".replace(".", "p").replace("-", "m")
        metadata = {key: value, **metadata}
        paths = []
        for plane in ("atomic", "bosonic"):
            path = Path(self.config.out_dir) / f"{self.tag}_heatmap_{plane}_{label}"
            frame = projection_heatmap(state, plane, self.config.heatmap_points)
            paths.append(save_heatmap(frame, path, {"plane": plane, **metadata}))
        return paths

    def print_summary(self) -> None:
        elapsed = time.time() - self.start_time if self.start_time else 0.0
        logger.warning(f"{self.title} interrupted after {format_time(elapsed)}: "
                       f"{self.completed} of {self.planned or '?'} items done")

    @abstractmethod
    def run(self) -> pd.DataFrame:
        """Compute the main result table."""

    @abstractmethod
    def summary(self, table: pd.DataFrame) -> Dict:
        """Scalar summary written to the JSON record."""

    def extra_tables(self, table: pd.DataFrame) -> Dict[str, pd.DataFrame]:
        return {}

    def execute(self) -> Dict[str, Path]:
        print_header(self.title, self.config_items())
        self.start_time = time.time()
        table = self.run()
        paths = write_outputs(self.config, self.tag, table, self.summary(table),
                              self.extra_tables(table))
        success(logger, f"{self.title} finished in {format_time(time.time() - self.start_time)}; "
                        f"results in {paths['table']}")
        return paths
