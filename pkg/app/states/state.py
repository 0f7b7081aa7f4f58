"""Pure, ensemble and time-averaged quantum states.

Every state reduces to a Fock-basis decomposition rho = sum_r w_r v_r v_r^dagger,
which is what Husimi evaluation and reduced density matrices consume.
"""
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..model.config import FockBasisSpec
from ..model.spectrum import Spectrum
from ..utils.errors import ConfigError, NormalizationError

NORM_TOLERANCE = 1e-10
WEIGHT_TOLERANCE = 1e-12
SIGNIFICANT_WEIGHT = 1e-14


def _fock_basis(spectrum: Spectrum) -> FockBasisSpec:
    if not isinstance(spectrum.basis, FockBasisSpec):
        raise ConfigError(f"eigenvectors must be in the Fock basis, got {spectrum.basis_tag!r}")
    return spectrum.basis


class QuantumState(ABC):
    """Density operator with a finite Fock-basis decomposition."""

    @property
    @abstractmethod
    def basis(self) -> FockBasisSpec:
        """Fock basis of ``fock_decomposition`` vectors."""

    @abstractmethod
    def fock_decomposition(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return (weights, vectors) with rho = vectors @ diag(weights) @ vectors^dagger."""

    @property
    def j(self) -> float:
        return self.basis.j

    def density_matrix(self) -> np.ndarray:
        weights, vectors = self.fock_decomposition()
        return (vectors * weights) @ vectors.conj().T


class PureState(QuantumState):
    """State vector in a Fock basis or in the eigenbasis of a spectrum.

    Args:
        coefficients (np.ndarray): Unit-norm coefficients.
        basis (Optional[FockBasisSpec]): Basis for Fock-basis coefficients.
        spectrum (Optional[Spectrum]): Spectrum for eigenbasis coefficients.
    """

    def __init__(self, coefficients: np.ndarray, basis: Optional[FockBasisSpec] = None,
                 spectrum: Optional[Spectrum] = None):
        if (basis is None) == (spectrum is None):
            raise ConfigError("give exactly one of basis or spectrum")
        coefficients = np.array(coefficients, dtype=complex)
        expected = basis.dim if basis is not None else spectrum.size
        if coefficients.shape != (expected,):
            raise ConfigError(f"expected {expected} coefficients, got shape {coefficients.shape}")
        norm = np.linalg.norm(coefficients)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise NormalizationError(f"state norm {norm:.12f} differs from 1")
        self.coefficients = coefficients
        self.coefficients.setflags(write=False)
        self.spectrum = spectrum
        self._basis = basis if basis is not None else _fock_basis(spectrum)

    @property
    def basis(self) -> FockBasisSpec:
        return self._basis

    @property
    def in_eigenbasis(self) -> bool:
        return self.spectrum is not None

    def fock_vector(self) -> np.ndarray:
        if self.spectrum is None:
            return self.coefficients
        return self.spectrum.eigenvectors @ self.coefficients

    def fock_decomposition(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.ones(1), self.fock_vector()[:, None]

    def overlap(self, other: "PureState") -> complex:
        """<self|other>."""
        if self.spectrum is not None and other.spectrum is self.spectrum:
            return complex(np.vdot(self.coefficients, other.coefficients))
        return complex(np.vdot(self.fock_vector(), other.fock_vector()))


class EnsembleState(QuantumState):
    """Convex mixture sum_i w_i |psi_i><psi_i| of pure states."""

    def __init__(self, components: Sequence[Tuple[float, PureState]]):
        if not components:
            raise ConfigError("an ensemble needs at least one component")
        weights = np.array([w for w, _ in components], dtype=float)
        if np.any(weights <= 0):
            raise NormalizationError("ensemble weights must be positive")
        if abs(weights.sum() - 1) > WEIGHT_TOLERANCE:
            raise NormalizationError(f"ensemble weights sum to {weights.sum():.15f}")
        bases = {(s.basis.j, s.basis.n_max) for _, s in components}
        if len(bases) != 1:
            raise ConfigError("ensemble components live in different bases")
        self.weights = weights
        self.members: List[PureState] = [s for _, s in components]

    @classmethod
    def equal_weights(cls, states: Sequence[PureState]) -> "EnsembleState":
        n = len(states)
        return cls([(1.0 / n, s) for s in states])

    @property
    def components(self) -> List[Tuple[float, PureState]]:
        return list(zip(self.weights.tolist(), self.members))

    @property
    def basis(self) -> FockBasisSpec:
        return self.members[0].basis

    def fock_decomposition(self) -> Tuple[np.ndarray, np.ndarray]:
        vectors = np.column_stack([s.fock_vector() for s in self.members])
        return self.weights.copy(), vectors


def time_average_weights(energies: np.ndarray, T: float) -> np.ndarray:
    """Kernel W_kl(T) = (e^{-i(E_k - E_l)T} - 1)/(-i(E_k - E_l)T), W_kk = 1.

    Written as e^{-ix/2} sin(x/2)/(x/2) with x = (E_k - E_l)T, finite at x = 0.
    """
    x = (energies[:, None] - energies[None, :]) * T
    return np.exp(-0.5j * x) * np.sinc(x / (2 * np.pi))


class TimeAveragedState(QuantumState):
    """(1/T) integral_0^T |psi(t)><psi(t)| dt, kept exactly through the kernel W(T).

    Args:
        eigen_coefficients (np.ndarray): c_k = <E_k|psi(0)> over the whole spectrum.
        spectrum (Spectrum): Fock-basis spectrum.
        T (float): Averaging time, T >= 0.
    """

    def __init__(self, eigen_coefficients: np.ndarray, spectrum: Spectrum, T: float):
        if T < 0:
            raise ConfigError("averaging time T must be non-negative")
        self.initial = PureState(eigen_coefficients, spectrum=spectrum)
        self.spectrum = spectrum
        self.T = float(T)
        probs = np.abs(self.initial.coefficients) ** 2
        self.support = np.flatnonzero(probs > SIGNIFICANT_WEIGHT)

    @property
    def basis(self) -> FockBasisSpec:
        return self.initial.basis

    @property
    def coefficients(self) -> np.ndarray:
        return self.initial.coefficients[self.support]

    def kernel(self) -> np.ndarray:
        """W(T) on the significant eigencomponents."""
        return time_average_weights(self.spectrum.eigenvalues[self.support], self.T)

    def eigen_density(self) -> np.ndarray:
        """rho_kl = c_k c_l^* W_kl on the significant eigencomponents."""
        c = self.coefficients
        return np.outer(c, c.conj()) * self.kernel()

    def fock_decomposition(self) -> Tuple[np.ndarray, np.ndarray]:
        vals, vecs = np.linalg.eigh(self.eigen_density())
        keep = vals > SIGNIFICANT_WEIGHT * max(vals.max(), 1.0)
        weights = vals[keep]
        weights = weights / weights.sum()
        vectors = self.spectrum.eigenvectors[:, self.support] @ vecs[:, keep]
        return weights, vectors
