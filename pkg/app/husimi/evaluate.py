"""Husimi function Q_rho(x) = <x|rho|x> evaluated in the Fock basis.

Coherent states are used with their exact amplitudes restricted to the
truncated basis; for states living in that basis the inner products are
then exact.
"""
from typing import Optional, Tuple

import numpy as np

from ..classical.phase_space import PhasePoint, check_bloch
from ..model.config import FockBasisSpec
from ..model.spectrum import Spectrum
from ..states.coherent import bloch_amplitudes, glauber_amplitudes, glauber_tail
from ..states.state import QuantumState, TimeAveragedState, _fock_basis
from ..utils.errors import ConfigError, TruncationError
from ..utils.parallel import ordered_map

CHUNK = 4096


def _as_points(points) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[-1] != 4:
        raise ConfigError(f"points must have shape (M, 4), got {points.shape}")
    check_bloch(points[:, 2], points[:, 3])
    return points


def coherent_factors(points: np.ndarray, basis: FockBasisSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Glauber (M, levels) and Bloch (M, 2j+1) amplitude factors at each point."""
    bos = glauber_amplitudes(points[:, 0], points[:, 1], basis.j, basis.levels)
    atom = bloch_amplitudes(points[:, 2], points[:, 3], basis.j)
    return bos, atom


def _overlaps_chunk(points: np.ndarray, vectors: np.ndarray, basis: FockBasisSpec) -> np.ndarray:
    bos, atom = coherent_factors(points, basis)
    r = vectors.shape[1]
    partial = bos.conj() @ vectors.reshape(basis.levels, basis.spin_dim * r)
    partial = partial.reshape(len(points), basis.spin_dim, r)
    return np.sum(partial * atom.conj()[:, :, None], axis=1)


def coherent_overlaps(points, vectors: np.ndarray, basis: FockBasisSpec,
                      workers: int = 1) -> np.ndarray:
    """<x_m|v_r> for every point and every Fock-basis column vector, shape (M, r)."""
    points = _as_points(points)
    vectors = np.asarray(vectors).reshape(basis.dim, -1)
    chunks = [points[i:i + CHUNK] for i in range(0, len(points), CHUNK)]
    parts = ordered_map(lambda c: _overlaps_chunk(c, vectors, basis), chunks, workers)
    return np.concatenate(parts, axis=0) if parts else np.empty((0, vectors.shape[1]), complex)


def eigen_overlaps(points, spectrum: Spectrum, columns: Optional[np.ndarray] = None,
                   workers: int = 1) -> np.ndarray:
    """<x_m|E_k> for the selected eigenstates, shape (M, K)."""
    basis = _fock_basis(spectrum)
    vectors = spectrum.eigenvectors if columns is None else spectrum.eigenvectors[:, columns]
    return coherent_overlaps(points, vectors, basis, workers)


def husimi_from_overlaps(overlaps: np.ndarray, coefficients: np.ndarray,
                         kernel: Optional[np.ndarray] = None) -> np.ndarray:
    """Husimi values from eigenstate overlaps <x|E_k> and coefficients c_k.

    Without a kernel this is |sum_k c_k <x|E_k>|^2; with a time-average kernel
    W it is sum_kl c_k c_l^* W_kl <x|E_k><x|E_l>^*.
    """
    amplitudes = overlaps * coefficients[None, :]
    if kernel is None:
        return np.abs(np.sum(amplitudes, axis=1)) ** 2
    return np.real(np.sum((amplitudes @ kernel) * amplitudes.conj(), axis=1))


def husimi_values(state: QuantumState, points, workers: int = 1) -> np.ndarray:
    """Q_rho at an array of points of shape (M, 4)."""
    if isinstance(state, TimeAveragedState):
        overlaps = eigen_overlaps(points, state.spectrum, state.support, workers)
        return husimi_from_overlaps(overlaps, state.coefficients, state.kernel())
    weights, vectors = state.fock_decomposition()
    overlaps = coherent_overlaps(points, vectors, state.basis, workers)
    return np.abs(overlaps) ** 2 @ weights


def husimi(state: QuantumState, x: PhasePoint, tail_tolerance: Optional[float] = None) -> float:
    """Q_rho(x) = <x|rho|x>.

    Args:
        state (QuantumState): Any state with a Fock-basis representation.
        x (PhasePoint): Evaluation point.
        tail_tolerance (Optional[float]): When given, require the Glauber
            weight of |x> above n_max to stay below it.

    Raises:
        TruncationError: Coherent tail above ``tail_tolerance``.
    """
    if tail_tolerance is not None:
        tail = glauber_tail(x.q, x.p, state.j, state.basis.n_max)
        if tail > tail_tolerance:
            raise TruncationError(f"coherent state at x has tail {tail:.2e} beyond n_max")
    return float(husimi_values(state, x.as_array()[None, :])[0])
