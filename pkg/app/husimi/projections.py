"""Husimi projections onto the atomic and bosonic planes.

Integrating Q_rho over one plane leaves the Husimi function of the reduced
density matrix on the other one:

    (j/2pi) int dq dp Q_rho = <Q,P| Tr_bos rho |Q,P>
    ((2j+1)/4pi) int dQ dP Q_rho = <q,p| Tr_spin rho |q,p>
"""
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..classical.phase_space import check_bloch
from ..states.coherent import bloch_amplitudes, glauber_amplitudes
from ..states.state import QuantumState
from ..utils.errors import ConfigError
from ..utils.io import write_json, write_table
from .grid import PLANES, ProjectionGrid

RANK_CUTOFF = 1e-14


def _blocks(state: QuantumState) -> Tuple[np.ndarray, np.ndarray]:
    weights, vectors = state.fock_decomposition()
    basis = state.basis
    return weights, vectors.reshape(basis.levels, basis.spin_dim, -1)


def reduced_atomic_density(state: QuantumState) -> np.ndarray:
    """Tr_bos rho as a (2j+1) x (2j+1) matrix in the |j, m_z> basis."""
    weights, blocks = _blocks(state)
    return np.einsum("nkr,nlr,r->kl", blocks, blocks.conj(), weights)


def reduced_bosonic_density(state: QuantumState) -> np.ndarray:
    """Tr_spin rho as a levels x levels matrix in the Fock basis."""
    weights, blocks = _blocks(state)
    return np.einsum("nkr,mkr,r->nm", blocks, blocks.conj(), weights)


def _factorize(density: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    vals, vecs = np.linalg.eigh(density)
    keep = vals > RANK_CUTOFF * max(vals.max(), 1.0)
    return vals[keep], vecs[:, keep]


def _expectation(amplitudes: np.ndarray, density: np.ndarray) -> np.ndarray:
    vals, vecs = _factorize(density)
    return np.abs(amplitudes.conj() @ vecs) ** 2 @ vals


def atomic_projection(state: QuantumState, Q, P) -> np.ndarray:
    """Projected Husimi function on the Bloch disk, (j/2pi) int dq dp Q_rho.

    Accepts scalars or arrays; returns the same shape.
    """
    check_bloch(Q, P)
    Q, P = np.broadcast_arrays(np.asarray(Q, dtype=float), np.asarray(P, dtype=float))
    amps = bloch_amplitudes(Q.ravel(), P.ravel(), state.j)
    values = _expectation(amps, reduced_atomic_density(state))
    return values.reshape(Q.shape) if Q.ndim else float(values[0])


def bosonic_projection(state: QuantumState, q, p) -> np.ndarray:
    """Projected Husimi function on the bosonic plane, ((2j+1)/4pi) int dQ dP Q_rho."""
    q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
    amps = glauber_amplitudes(q.ravel(), p.ravel(), state.j, state.basis.levels)
    values = _expectation(amps, reduced_bosonic_density(state))
    return values.reshape(q.shape) if q.ndim else float(values[0])


def projection_on_grid(state: QuantumState, grid: ProjectionGrid) -> np.ndarray:
    if grid.plane == "atomic":
        return atomic_projection(state, grid.nodes[:, 0], grid.nodes[:, 1])
    return bosonic_projection(state, grid.nodes[:, 0], grid.nodes[:, 1])


def projection_heatmap(state: QuantumState, plane: str, n: int = 101,
                       extent: Optional[float] = None) -> pd.DataFrame:
    """Projection on a regular n x n raster; atomic nodes outside the disk are NaN."""
    if plane not in PLANES:
        raise ConfigError(f"plane must be one of {PLANES}, got {plane!r}")
    half = 2.0 if plane == "atomic" else (extent or 2.5)
    axis = np.linspace(-half, half, n)
    c1, c2 = (a.ravel() for a in np.meshgrid(axis, axis, indexing="ij"))
    values = np.full(c1.size, np.nan)
    if plane == "atomic":
        inside = c1 ** 2 + c2 ** 2 <= 4
        values[inside] = atomic_projection(state, c1[inside], c2[inside])
        columns = ("Q", "P")
    else:
        values = bosonic_projection(state, c1, c2)
        columns = ("q", "p")
    return pd.DataFrame({columns[0]: c1, columns[1]: c2, "value": values})


def save_heatmap(frame: pd.DataFrame, path: Union[str, Path], metadata: Dict) -> Path:
    """Write ``<path>.csv`` and ``<path>.json`` (plane, state descriptor, ...)."""
    path = Path(path).with_suffix("")
    write_json(metadata, path.with_suffix(".json"))
    return write_table(frame, path.with_suffix(".csv"))
