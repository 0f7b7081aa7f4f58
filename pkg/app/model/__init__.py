"""Quantum Dicke Hamiltonian: bases, matrix assembly and diagonalization."""

from .config import EfficientBasisSpec, FockBasisSpec, ModelParams, basis_from_tag
from .hamiltonian import (build_efficient_hamiltonian, build_fock_hamiltonian,
                          displaced_fock_overlaps, parity_diagonal)
from .spectrum import (Spectrum, convergence_filter, diagonalize, load_spectrum,
                       save_spectrum, tail_weights)


def build_hamiltonian(params: ModelParams, basis):
    """Dispatch to the builder matching the basis type."""
    if isinstance(basis, EfficientBasisSpec):
        return build_efficient_hamiltonian(params, basis)
    return build_fock_hamiltonian(params, basis)


__all__ = [
    'ModelParams', 'FockBasisSpec', 'EfficientBasisSpec', 'basis_from_tag',
    'build_fock_hamiltonian', 'build_efficient_hamiltonian', 'build_hamiltonian',
    'displaced_fock_overlaps', 'parity_diagonal',
    'Spectrum', 'diagonalize', 'convergence_filter', 'tail_weights',
    'save_spectrum', 'load_spectrum',
]
