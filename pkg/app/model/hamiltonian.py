"""Dicke Hamiltonian assembly in the Fock and efficient bases."""
import numpy as np
import scipy.sparse as sparse

from ..utils.errors import ConfigError
from .config import EfficientBasisSpec, FockBasisSpec, ModelParams


def spin_ladder(j: float) -> sparse.csr_matrix:
    """J_+ in the ascending |j, m> basis (m = -j ... j)."""
    m = np.arange(int(round(2 * j))) - j
    vals = np.sqrt(j * (j + 1) - m * (m + 1))
    return sparse.diags(vals, -1, format="csr")


def spin_z(j: float) -> sparse.csr_matrix:
    return sparse.diags(np.arange(int(round(2 * j)) + 1) - j, format="csr")


def boson_annihilation(levels: int) -> sparse.csr_matrix:
    return sparse.diags(np.sqrt(np.arange(1, levels)), 1, format="csr")


def _check_basis(params: ModelParams, basis) -> None:
    if abs(basis.j - params.j) > 1e-12:
        raise ConfigError(f"basis j={basis.j} does not match model j={params.j}")


def build_fock_hamiltonian(params: ModelParams, basis: FockBasisSpec) -> sparse.csr_matrix:
    """Assemble H_D in the truncated Fock basis.

    Ordering follows ``kron(boson, spin)``: flat index n*(2j+1) + (m_z + j).

    Args:
        params (ModelParams): Hamiltonian parameters.
        basis (FockBasisSpec): Truncation; ``basis.j`` must equal ``params.j``.

    Returns:
        sparse.csr_matrix: Real symmetric matrix of dimension ``basis.dim``.
    """
    _check_basis(params, basis)
    levels, spin = basis.levels, basis.spin_dim
    a = boson_annihilation(levels)
    jp = spin_ladder(basis.j)
    number = sparse.diags(np.arange(levels, dtype=float))
    H = params.omega * sparse.kron(number, sparse.identity(spin))
    H = H + params.omega0 * sparse.kron(sparse.identity(levels), spin_z(basis.j))
    if params.gamma != 0.0:
        coupling = params.gamma / np.sqrt(2 * basis.j)
        H = H + coupling * sparse.kron(a + a.T, jp + jp.T)
    return sparse.csr_matrix(H)


def parity_diagonal(basis: FockBasisSpec) -> np.ndarray:
    """Eigenvalues (+1/-1) of exp(i*pi*(n + m_z + j)) on the Fock basis."""
    n = np.repeat(np.arange(basis.levels), basis.spin_dim)
    k = np.tile(np.arange(basis.spin_dim), basis.levels)
    return np.where((n + k) % 2 == 0, 1.0, -1.0)


def displaced_fock_overlaps(alpha: float, levels: int) -> np.ndarray:
    """Matrix <m|D(alpha)|n> for real alpha, m, n < levels.

    Uses d[m, n] = (sqrt(m) d[m-1, n-1] - alpha d[m, n-1]) / sqrt(n) with
    d[m, 0] = alpha^m e^{-alpha^2/2} / sqrt(m!); the recurrence only reaches
    lower indices so the truncated block is exact.
    """
    d = np.zeros((levels, levels))
    d[0, 0] = np.exp(-alpha * alpha / 2)
    for m in range(1, levels):
        d[m, 0] = d[m - 1, 0] * alpha / np.sqrt(m)
    sqrt_m = np.sqrt(np.arange(levels))
    for n in range(1, levels):
        d[1:, n] = sqrt_m[1:] * d[:-1, n - 1]
        d[:, n] -= alpha * d[:, n - 1]
        d[:, n] /= np.sqrt(n)
    return d


def displacement_scale(params: ModelParams) -> float:
    """Coefficient c of beta_m = -c*m_x, c = 2*gamma/(omega*sqrt(2j))."""
    return 2 * params.gamma / (params.omega * np.sqrt(2 * params.j))


def build_efficient_hamiltonian(params: ModelParams, basis: EfficientBasisSpec) -> sparse.csr_matrix:
    """Assemble H_D in the efficient basis |N> x |j, m_x>.

    Without the omega0 term it is diagonal, omega*N - (2 gamma^2 / omega) m_x^2 / j;
    ModelParams keeps omega0 > 0, so that limit is only approached.
    omega0*J_z couples neighbouring m_x blocks through <N'|D(beta_m - beta_m')|N>.

    Args:
        params (ModelParams): Hamiltonian parameters.
        basis (EfficientBasisSpec): Truncation; ``basis.j`` must equal ``params.j``.

    Returns:
        sparse.csr_matrix: Real symmetric matrix of dimension ``basis.dim``.
    """
    _check_basis(params, basis)
    levels, spin, j = basis.levels, basis.spin_dim, basis.j
    m_x = np.arange(spin) - j
    N = np.arange(levels, dtype=float)
    diag = (params.omega * N[:, None]
            - (2 * params.gamma ** 2 / params.omega) * (m_x[None, :] ** 2) / j)
    c = displacement_scale(params)
    # J_z = -(J'_+ + J'_-)/2 in the rotated (J_x eigen) basis
    ladder = np.sqrt(j * (j + 1) - m_x[:-1] * (m_x[:-1] + 1))
    # <N', k+1|H|N, k> carries D(beta_k - beta_{k+1}) = D(c) for every k
    overlaps = displaced_fock_overlaps(c, levels)
    Np, Nn = np.nonzero(overlaps != 0.0)
    k = np.arange(spin - 1)
    rows = (Np[:, None] * spin + k[None, :] + 1).ravel()
    cols = (Nn[:, None] * spin + k[None, :]).ravel()
    vals = (-0.5 * params.omega0 * overlaps[Np, Nn][:, None] * ladder[None, :]).ravel()
    upper = sparse.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))
    return sparse.csr_matrix(sparse.diags(diag.ravel()) + upper + upper.T)
