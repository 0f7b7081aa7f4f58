"""Energy moments, exact evolution and time averaging of coherent states."""
from typing import List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sparse

from ..classical.phase_space import PhasePoint
from ..model.spectrum import Spectrum, tail_weights
from ..utils.errors import ConfigError, CoverageError, TruncationError
from ..utils.logger import get_logger
from ..utils.parallel import ordered_map
from .coherent import coherent_fock_coefficients
from .state import EnsembleState, PureState, QuantumState, TimeAveragedState, _fock_basis

logger = get_logger(__name__)

COVERAGE_TOLERANCE = 1e-6
LEAK_TOLERANCE = 1e-8
LEAK_GUARD_FRACTION = 0.1


def _eigen_moments(state: QuantumState, spectrum: Spectrum) -> Tuple[float, float]:
    energies = spectrum.eigenvalues
    if isinstance(state, PureState):
        probs = [(1.0, np.abs(state.coefficients) ** 2)]
    elif isinstance(state, TimeAveragedState):
        # the kernel has unit diagonal, so energy populations are those of psi(0)
        probs = [(1.0, np.abs(state.initial.coefficients) ** 2)]
    else:
        probs = [(w, np.abs(s.coefficients) ** 2) for w, s in state.components]
    first = sum(w * np.dot(p, energies) for w, p in probs)
    second = sum(w * np.dot(p, energies ** 2) for w, p in probs)
    return first, second


def _uses_spectrum(state: QuantumState, spectrum: Spectrum) -> bool:
    if isinstance(state, PureState):
        return state.spectrum is spectrum
    if isinstance(state, TimeAveragedState):
        return state.spectrum is spectrum
    if isinstance(state, EnsembleState):
        return all(s.spectrum is spectrum for s in state.members)
    return False


def energy_moments(state: QuantumState, operator: Union[Spectrum, sparse.spmatrix, np.ndarray],
                   leak_tolerance: float = LEAK_TOLERANCE) -> Tuple[float, float]:
    """Scaled mean energy <H>/j and width sqrt(<H^2> - <H>^2)/j.

    Args:
        state (QuantumState): Any state.
        operator: The spectrum the state's eigen-coefficients refer to, or the
            Fock-basis Hamiltonian matrix.
        leak_tolerance (float): Largest state weight allowed in the top bosonic
            levels, where H|psi> is cut by the truncation.

    Raises:
        ConfigError: A spectrum that the state is not expanded in.
        TruncationError: State weight in the guard band above tolerance.
    """
    j = state.j
    if isinstance(operator, Spectrum):
        if not _uses_spectrum(state, operator):
            raise ConfigError("state is not expanded in this spectrum; pass the Hamiltonian matrix")
        first, second = _eigen_moments(state, operator)
    else:
        weights, vectors = state.fock_decomposition()
        if operator.shape[0] != vectors.shape[0]:
            raise ConfigError("Hamiltonian and state dimensions differ")
        leak = float(np.dot(weights, tail_weights(vectors, state.basis, LEAK_GUARD_FRACTION)))
        if leak > leak_tolerance:
            raise TruncationError(f"state weight {leak:.2e} in the truncation guard band")
        applied = operator @ vectors
        first = float(np.real(np.sum(weights * np.sum(vectors.conj() * applied, axis=0))))
        second = float(np.sum(weights * np.sum(np.abs(applied) ** 2, axis=0)))
    variance = max(second - first * first, 0.0)
    return first / j, float(np.sqrt(variance)) / j


def eigen_coefficients(x: PhasePoint, spectrum: Spectrum,
                       coverage_tolerance: float = COVERAGE_TOLERANCE) -> np.ndarray:
    """c_k = <E_k|x> over converged eigenstates, zero elsewhere, renormalized.

    Raises:
        CoverageError: converged eigenstates capture less than 1 - coverage_tolerance.
    """
    basis = _fock_basis(spectrum)
    psi = coherent_fock_coefficients(x, basis)
    conv = spectrum.converged_indices()
    c = np.zeros(spectrum.size, dtype=complex)
    c[conv] = spectrum.eigenvectors[:, conv].conj().T @ psi
    captured = float(np.sum(np.abs(c) ** 2))
    if captured < 1 - coverage_tolerance:
        raise CoverageError(f"converged eigenstates capture {captured:.8f} of the coherent state")
    logger.debug(f"coherent state captured weight {captured:.12f}")
    return c / np.sqrt(captured)


def evolve(x: PhasePoint, spectrum: Spectrum, t: float,
           coverage_tolerance: float = COVERAGE_TOLERANCE) -> PureState:
    """|psi(t)> = sum_k <E_k|x> e^{-i E_k t} |E_k>, in the eigenbasis of ``spectrum``."""
    c = eigen_coefficients(x, spectrum, coverage_tolerance)
    return PureState(c * np.exp(-1j * spectrum.eigenvalues * t), spectrum=spectrum)


def evolve_series(x: PhasePoint, spectrum: Spectrum, times: Sequence[float],
                  workers: int = 1) -> List[PureState]:
    """``evolve`` over a time grid; the expansion is computed once."""
    c = eigen_coefficients(x, spectrum)
    energies = spectrum.eigenvalues
    return ordered_map(lambda t: PureState(c * np.exp(-1j * energies * t), spectrum=spectrum),
                       list(times), workers)


def survival_probability(initial: PureState, later: PureState) -> float:
    return float(abs(initial.overlap(later)) ** 2)


def time_average_kernel(c: np.ndarray, spectrum: Spectrum, T: float) -> TimeAveragedState:
    """Time-averaged state rho(T) with the exact spectral kernel W(T)."""
    return TimeAveragedState(c, spectrum, T)
