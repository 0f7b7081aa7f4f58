"""Renyi occupations of the atomic subspace and of energy shells."""
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..classical.shell import ShellSample
from ..husimi.evaluate import husimi_values
from ..husimi.grid import ProjectionGrid
from ..husimi.projections import projection_on_grid
from ..model.config import ModelParams
from ..states.state import QuantumState
from ..utils.errors import ConfigError, ZeroVolumeError
from ..utils.io import write_json, write_table
from ..utils.logger import get_logger
from ..utils.parallel import ordered_map
from .results import OccupationResult
from .volumes import moment_integrand, renyi_volume, volume_from_moments

logger = get_logger(__name__)

ATOMIC_AREA = 4 * np.pi
MASS_WARN_TOLERANCE = 1e-6

StateOrValues = Union[QuantumState, np.ndarray]


def occupation_atomic(state: StateOrValues, alpha: float, grid: ProjectionGrid,
                      params: ModelParams) -> OccupationResult:
    """L_alpha(A, rho): Renyi volume of the atomic projection over the Bloch-disk area.

    The projection is normalized by its quadrature mass, which equals
    4pi/(2j+1) up to quadrature error for a normalized state.

    Args:
        state: A state, or precomputed projection values at the grid nodes.
        alpha (float): Renyi order.
        grid (ProjectionGrid): Atomic-plane grid.
        params (ModelParams): Model constants, for C.
    """
    if grid.plane != "atomic":
        raise ConfigError("occupation_atomic needs an atomic grid")
    from_state = isinstance(state, QuantumState)
    values = projection_on_grid(state, grid) if from_state else np.asarray(state, dtype=float)
    mass = grid.integrate(values)
    if mass <= 0:
        raise ZeroVolumeError("atomic projection has no mass on the grid")
    expected = 4 * np.pi / (2 * params.j + 1)
    if from_state and abs(mass / expected - 1) > MASS_WARN_TOLERANCE:
        logger.warning(f"atomic projection mass {mass:.8f} differs from {expected:.8f}")
    volume = renyi_volume(values / mass, grid.weights, alpha)
    return OccupationResult(value=volume / ATOMIC_AREA, alpha=float(alpha),
                            reference_volume=ATOMIC_AREA, normalization=params.phase_space_norm,
                            stderr=0.0, volume=volume,
                            config={"plane": grid.plane, "nodes": grid.size,
                                    "quadrature_mass": mass, **grid.extent})


def _batch_occupation(shell: ShellSample, values: np.ndarray, integrand: np.ndarray,
                      alpha: float, reference: float) -> float:
    masses = shell.batch_integrals(values)
    moments = shell.batch_integrals(integrand)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        per_batch = np.array([volume_from_moments(c, m, alpha) if c > 0 else np.nan
                              for c, m in zip(masses, moments)]) / reference
    per_batch = per_batch[np.isfinite(per_batch)]
    if per_batch.size < 2:
        return float("nan")
    return float(np.std(per_batch, ddof=1) / np.sqrt(per_batch.size))


def occupation_shell(state: StateOrValues, epsilon: float, alpha: float, shell: ShellSample,
                     nu: float, params: ModelParams, workers: int = 1) -> OccupationResult:
    """L_alpha(eps, rho): Renyi occupation of the energy shell at eps.

    C_eps = int Q_rho over the shell and the moment int Q_rho^alpha are
    estimated on the weighted shell sample; the reference volume is 4pi^2 nu.

    Args:
        state: A state, or precomputed Husimi values at ``shell.points``.
        epsilon (float): Shell energy; must match ``shell.epsilon``.
        alpha (float): Renyi order.
        shell (ShellSample): Sample of the shell.
        nu (float): Density of states at epsilon.
        params (ModelParams): Model constants.
        workers (int): Threads for Husimi evaluation.

    Raises:
        ZeroVolumeError: C_eps consistent with zero.
    """
    if abs(shell.epsilon - epsilon) > 1e-12:
        raise ConfigError(f"shell sampled at {shell.epsilon}, occupation requested at {epsilon}")
    if nu <= 0:
        raise ConfigError("density of states must be positive")
    values = (husimi_values(state, shell.points, workers) if isinstance(state, QuantumState)
              else np.asarray(state, dtype=float))
    mass = shell.integrate(values)
    if mass.value <= 0 or mass.value <= 3 * mass.stderr:
        raise ZeroVolumeError(f"C_eps = {mass.value:.3e} +- {mass.stderr:.1e} is consistent with zero")
    integrand = moment_integrand(values, alpha)
    moment = shell.integrate(integrand)
    reference = 4 * np.pi ** 2 * nu
    volume = volume_from_moments(mass.value, moment.value, alpha)
    stderr = _batch_occupation(shell, values, integrand, alpha, reference)
    result = OccupationResult(value=volume / reference, alpha=float(alpha),
                              reference_volume=reference, normalization=mass.value,
                              stderr=stderr, volume=volume,
                              config={"epsilon": epsilon, "seed": shell.seed,
                                      "n_samples": shell.n_samples, "n_batches": shell.n_batches,
                                      "normalization_stderr": mass.stderr})
    if not result.within_bounds():
        logger.warning(f"shell occupation {result.value:.4f} exceeds 1 beyond 3 stderr")
    return result


def energy_profile(state: QuantumState, epsilon_grid: Sequence[float],
                   shells: Union[Sequence[ShellSample], Mapping[float, ShellSample]],
                   workers: int = 1, alphas: Sequence[float] = (),
                   densities: Optional[Sequence[float]] = None,
                   params: Optional[ModelParams] = None) -> pd.DataFrame:
    """C_eps = int over the shell of Q_rho, for each energy in ``epsilon_grid``.

    With ``alphas`` the shell occupations L_alpha(eps, rho) are reported on the
    same Husimi values, as ``l_<alpha>`` and ``l_<alpha>_stderr`` columns (NaN
    where C_eps is consistent with zero). Their OccupationResult records are
    kept in ``frame.attrs["occupations"]`` as (epsilon, result) pairs.

    Args:
        state (QuantumState): Profiled state.
        epsilon_grid (Sequence[float]): Shell energies.
        shells: One sample per energy, as a sequence or keyed by energy.
        workers (int): Threads over shells.
        alphas (Sequence[float]): Renyi orders of the occupation columns.
        densities (Optional[Sequence[float]]): nu(eps) per energy, needed with ``alphas``.
        params (Optional[ModelParams]): Model constants, needed with ``alphas``.

    Returns:
        pd.DataFrame: Columns epsilon, c_eps, stderr and the occupation columns.
    """
    if isinstance(shells, Mapping):
        shells = [shells[e] for e in epsilon_grid]
    if len(shells) != len(epsilon_grid):
        raise ConfigError("one shell sample is needed per grid energy")
    alphas = list(alphas)
    if alphas and (params is None or densities is None or len(densities) != len(shells)):
        raise ConfigError("shell occupations need params and one density per grid energy")

    def profile_point(i: int):
        shell = shells[i]
        values = husimi_values(state, shell.points)
        results = {}
        for alpha in alphas:
            try:
                results[alpha] = occupation_shell(values, shell.epsilon, alpha, shell,
                                                  densities[i], params)
            except ZeroVolumeError:
                results[alpha] = None
        return shell.integrate(values), results

    points = ordered_map(profile_point, range(len(shells)), workers)
    frame = pd.DataFrame({"epsilon": np.asarray(epsilon_grid, dtype=float),
                          "c_eps": [max(e.value, 0.0) for e, _ in points],
                          "stderr": [e.stderr for e, _ in points]})
    for alpha in alphas:
        found = [r[alpha] for _, r in points]
        frame[f"l_{alpha:g}"] = [np.nan if r is None else r.value for r in found]
        frame[f"l_{alpha:g}_stderr"] = [np.nan if r is None else r.stderr for r in found]
    frame.attrs["occupations"] = [(float(e), r[a]) for e, (_, r) in zip(epsilon_grid, points)
                                  for a in alphas if r[a] is not None]
    return frame


def save_occupations(results: List[OccupationResult], path: Union[str, Path],
                     descriptors: Optional[List[Dict]] = None) -> Path:
    """Write ``<path>.json`` records and a flat ``<path>.csv`` table."""
    path = Path(path).with_suffix("")
    descriptors = descriptors or [None] * len(results)
    records = [r.to_record(d) for r, d in zip(results, descriptors)]
    write_json({"results": records}, path.with_suffix(".json"))
    table = pd.DataFrame([(r.alpha, r.value, r.stderr, r.volume, r.normalization) for r in results],
                         columns=["alpha", "value", "stderr", "volume", "normalization"])
    return write_table(table, path.with_suffix(".csv"))
