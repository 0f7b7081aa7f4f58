import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.linalg as linalg
import scipy.sparse as sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from ..utils.errors import ConfigError, EigensolverError
from ..utils.logger import get_logger
from .config import EfficientBasisSpec, FockBasisSpec, ModelParams, basis_from_tag
from .hamiltonian import parity_diagonal

logger = get_logger(__name__)

BasisSpec = Union[FockBasisSpec, EfficientBasisSpec]

DEFAULT_GUARD_FRACTION = 0.1
DEFAULT_THRESHOLD = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues and eigenvectors of a truncated Hamiltonian.

    Arrays are read-only after construction so a spectrum can be shared
    between threads.

    Attributes:
        params (Optional[ModelParams]): Model the matrix was built from.
        basis (Optional[BasisSpec]): Basis of the eigenvector coefficients.
        eigenvalues (np.ndarray): Ascending absolute energies E_k.
        eigenvectors (np.ndarray): Columns are eigenvectors.
        converged (np.ndarray): Per-state convergence flags.
    """
    params: Optional[ModelParams]
    basis: Optional[BasisSpec]
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    converged: np.ndarray

    def __post_init__(self):
        for arr in (self.eigenvalues, self.eigenvectors, self.converged):
            arr.setflags(write=False)

    @property
    def basis_tag(self) -> str:
        return self.basis.tag if self.basis is not None else "none"

    @property
    def scaled_energies(self) -> np.ndarray:
        if self.params is None:
            return self.eigenvalues
        return self.eigenvalues / self.params.j

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    @property
    def converged_count(self) -> int:
        return int(np.count_nonzero(self.converged))

    def converged_indices(self) -> np.ndarray:
        return np.flatnonzero(self.converged)


def _is_symmetric(H) -> bool:
    if sparse.issparse(H):
        diff = abs(H - H.T)
        scale = max(abs(H).max(), 1.0)
        return diff.max() <= 1e-12 * scale if diff.nnz else True
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        return False
    return np.max(np.abs(H - H.T), initial=0.0) <= 1e-12 * max(np.max(np.abs(H), initial=0.0), 1.0)


def _solve(H, e_cutoff: Optional[float], n_states: Optional[int], dense_limit: int):
    dim = H.shape[0]
    try:
        if dim <= dense_limit:
            dense = H.toarray() if sparse.issparse(H) else np.asarray(H, dtype=float)
            return linalg.eigh(dense)
        if n_states is not None and n_states < dim - 1:
            logger.debug(f"eigsh: {n_states} lowest states of a {dim}-dimensional matrix")
            vals, vecs = eigsh(sparse.csr_matrix(H), k=n_states, which="SA")
            return vals, vecs
        dense = H.toarray() if sparse.issparse(H) else np.asarray(H, dtype=float)
        if e_cutoff is not None:
            logger.debug(f"partial dense solve below E={e_cutoff:.4f} (dim {dim})")
            return linalg.eigh(dense, subset_by_value=(-np.inf, e_cutoff), driver="evr")
        logger.warning(f"full dense diagonalization of dimension {dim}")
        return linalg.eigh(dense)
    except (np.linalg.LinAlgError, ArpackNoConvergence, ValueError) as exc:
        raise EigensolverError(f"eigensolver failed: {exc}") from exc


def diagonalize(H,
                params: Optional[ModelParams] = None,
                basis: Optional[BasisSpec] = None,
                e_cutoff: Optional[float] = None,
                n_states: Optional[int] = None,
                dense_limit: int = 4000,
                use_parity: bool = False,
                guard_fraction: float = DEFAULT_GUARD_FRACTION,
                threshold: float = DEFAULT_THRESHOLD) -> Spectrum:
    """Diagonalize a real symmetric Hamiltonian.

    Matrices up to ``dense_limit`` are solved densely. Larger ones use a
    sparse Lanczos solve when ``n_states`` is given, or a partial dense solve
    for states below ``e_cutoff`` (scaled energy, multiplied by j when params
    are known).

    Args:
        H: Dense array or scipy sparse matrix.
        params (Optional[ModelParams]): Model, used for scaled energies.
        basis (Optional[BasisSpec]): Basis of H, used for convergence flags and parity.
        e_cutoff (Optional[float]): Scaled-energy cutoff for partial solves.
        n_states (Optional[int]): Number of lowest states for sparse solves.
        dense_limit (int): Largest dimension handled by the dense solver.
        use_parity (bool): Solve parity blocks separately (Fock basis only).
        guard_fraction (float): Passed to ``convergence_filter``.
        threshold (float): Passed to ``convergence_filter``.

    Returns:
        Spectrum: Ascending eigenpairs with convergence flags.

    Raises:
        EigensolverError: Non-symmetric input or solver failure.
    """
    if not _is_symmetric(H):
        raise EigensolverError("Hamiltonian is not symmetric")
    cutoff = None
    if e_cutoff is not None:
        cutoff = e_cutoff * params.j if params is not None else e_cutoff

    if use_parity:
        if not isinstance(basis, FockBasisSpec):
            raise ConfigError("parity blocks are only available in the Fock basis")
        H = sparse.csr_matrix(H)
        parity = parity_diagonal(basis)
        vals_all, vecs_all = [], []
        for sign in (1.0, -1.0):
            idx = np.flatnonzero(parity == sign)
            block = H[idx][:, idx]
            block_states = None if n_states is None else min(n_states, idx.size - 2)
            vals, vecs = _solve(block, cutoff, block_states, dense_limit)
            full = np.zeros((basis.dim, vals.size), dtype=vecs.dtype)
            full[idx] = vecs
            vals_all.append(vals)
            vecs_all.append(full)
        vals = np.concatenate(vals_all)
        vecs = np.hstack(vecs_all)
    else:
        vals, vecs = _solve(H, cutoff, n_states, dense_limit)

    order = np.argsort(vals, kind="stable")
    if n_states is not None:
        order = order[:n_states]
    vals = np.ascontiguousarray(vals[order])
    vecs = np.ascontiguousarray(vecs[:, order])

    converged = np.ones(vals.size, dtype=bool)
    spectrum = Spectrum(params, basis, vals, vecs, converged)
    if basis is not None:
        converged = convergence_filter(spectrum, guard_fraction, threshold)
        spectrum = Spectrum(params, basis, vals, vecs, converged)
    return spectrum


def guard_band_mask(basis: BasisSpec, guard_fraction: float) -> np.ndarray:
    """Boolean mask of basis states in the top ``guard_fraction`` of bosonic levels."""
    top = basis.levels - 1
    first_guard = int(np.floor(top * (1 - guard_fraction))) + 1
    levels = np.repeat(np.arange(basis.levels), basis.spin_dim)
    return levels >= first_guard


def tail_weights(vectors: np.ndarray, basis: BasisSpec, guard_fraction: float) -> np.ndarray:
    """Squared coefficient weight of each column inside the guard band."""
    mask = guard_band_mask(basis, guard_fraction)
    return np.sum(np.abs(vectors[mask]) ** 2, axis=0)


def convergence_filter(spec: Spectrum,
                       guard_fraction: float = DEFAULT_GUARD_FRACTION,
                       threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    """Flag eigenstates whose weight in the truncation guard band is negligible.

    Args:
        spec (Spectrum): Spectrum with a known basis.
        guard_fraction (float): Fraction of top bosonic levels forming the guard band.
        threshold (float): Largest tail weight counted as converged.

    Returns:
        np.ndarray: Boolean array, True for converged eigenstates.
    """
    if not 0 < guard_fraction < 1:
        raise ConfigError("guard_fraction must lie in (0, 1)")
    if threshold <= 0:
        raise ConfigError("threshold must be positive")
    if spec.basis is None:
        raise ConfigError("convergence_filter needs the spectrum's basis")
    return tail_weights(spec.eigenvectors, spec.basis, guard_fraction) < threshold


def _header(spectrum: Spectrum) -> dict:
    basis = spectrum.basis
    return {
        "params": asdict(spectrum.params) if spectrum.params is not None else None,
        "basis": spectrum.basis_tag,
        "truncation": None if basis is None else basis.levels - 1,
        "dim": int(spectrum.eigenvectors.shape[0]),
        "n_states": int(spectrum.size),
        "converged": spectrum.converged_count,
    }


def save_spectrum(spectrum: Spectrum, path: Union[str, Path]) -> Path:
    """Write ``<path>.npz`` (arrays + header) and a ``<path>.json`` sidecar.

    The npz container holds ``eigenvalues``, ``eigenvectors``, ``converged``
    and ``header`` (a JSON string with params, basis tag, dims, truncation).

    Returns:
        Path: Location of the npz container.
    """
    path = Path(path).with_suffix("")
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _header(spectrum)
    np.savez_compressed(path.with_suffix(".npz"),
                        eigenvalues=spectrum.eigenvalues,
                        eigenvectors=spectrum.eigenvectors,
                        converged=spectrum.converged,
                        header=np.array(json.dumps(header, sort_keys=True)))
    sidecar = dict(header)
    if spectrum.size:
        sidecar["scaled_energy_range"] = [float(spectrum.scaled_energies[0]),
                                          float(spectrum.scaled_energies[-1])]
    path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True))
    return path.with_suffix(".npz")


def load_spectrum(path: Union[str, Path]) -> Spectrum:
    """Read a spectrum written by ``save_spectrum``."""
    path = Path(path).with_suffix(".npz")
    if not path.exists():
        raise ConfigError(f"spectrum file {path} not found")
    with np.load(path, allow_pickle=False) as data:
        header = json.loads(str(data["header"]))
        params = ModelParams(**header["params"]) if header["params"] else None
        basis = None
        if header["basis"] != "none":
            basis = basis_from_tag(header["basis"], params.j, header["truncation"])
        return Spectrum(params, basis,
                        np.array(data["eigenvalues"]),
                        np.array(data["eigenvectors"]),
                        np.array(data["converged"]))
