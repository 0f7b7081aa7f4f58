"""Glauber and Bloch coherent-state amplitudes."""
import numpy as np
from scipy.special import gammaln, xlogy
from scipy.stats import poisson

from ..classical.phase_space import PhasePoint, check_bloch
from ..model.config import FockBasisSpec
from ..utils.errors import ConfigError, TruncationError

TAIL_TOLERANCE = 1e-10


def glauber_amplitudes(q, p, j: float, levels: int) -> np.ndarray:
    """<n|alpha> for alpha = sqrt(j/2)(q + ip), n < levels.

    Evaluated in log space; returns an array of shape q.shape + (levels,).
    """
    alpha = np.sqrt(j / 2) * (np.asarray(q, dtype=float) + 1j * np.asarray(p, dtype=float))
    alpha = alpha[..., None]
    n = np.arange(levels)
    mod2 = np.abs(alpha) ** 2
    log_mod = -mod2 / 2 + xlogy(n, np.abs(alpha)) - gammaln(n + 1) / 2
    return np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))


def glauber_tail(q: float, p: float, j: float, n_max: int) -> float:
    """Weight of |alpha> on photon numbers above n_max."""
    return float(poisson.sf(n_max, j * (q * q + p * p) / 2))


def bloch_amplitudes(Q, P, j: float) -> np.ndarray:
    """<j, m_z|Q, P> for m_z = -j ... j, shape Q.shape + (2j+1,).

    Uses cos^(2j-k)(theta/2) sin^k(theta/2) e^{ik phi'} with Z = 2 sin(theta/2)
    and phi' = arg(Q + iP), exact on the disk boundary Z^2 = 4.
    """
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    two_j = int(round(2 * j))
    k = np.arange(two_j + 1)
    half_z = np.sqrt(Q * Q + P * P)[..., None] / 2
    sin_half = np.clip(half_z, 0.0, 1.0)
    cos_half = np.sqrt(np.clip(1 - half_z * half_z, 0.0, None))
    log_binom = gammaln(two_j + 1) - gammaln(k + 1) - gammaln(two_j - k + 1)
    log_mod = log_binom / 2 + xlogy(two_j - k, cos_half) + xlogy(k, sin_half)
    phase = np.angle(Q + 1j * P)[..., None]
    return np.exp(log_mod) * np.exp(1j * k * phase)


def coherent_fock_coefficients(x: PhasePoint, basis: FockBasisSpec,
                               tail_tolerance: float = TAIL_TOLERANCE) -> np.ndarray:
    """Coefficients <n, m_z|x> of the coherent state |x> in a truncated Fock basis.

    Args:
        x (PhasePoint): Centre of the coherent state.
        basis (FockBasisSpec): Truncated basis.
        tail_tolerance (float): Largest Glauber weight allowed above n_max.

    Returns:
        np.ndarray: Unit-norm complex vector of length ``basis.dim``.

    Raises:
        BlochConstraintError: x outside the Bloch disk.
        TruncationError: Glauber tail above ``tail_tolerance``.
    """
    if not isinstance(basis, FockBasisSpec):
        raise ConfigError("coherent states are built in the Fock basis")
    check_bloch(x.Q, x.P)
    tail = glauber_tail(x.q, x.p, basis.j, basis.n_max)
    if tail > tail_tolerance:
        raise TruncationError(f"Glauber tail {tail:.2e} above n_max={basis.n_max} "
                              f"exceeds {tail_tolerance:.0e}")
    bos = glauber_amplitudes(x.q, x.p, basis.j, basis.levels)
    atom = bloch_amplitudes(x.Q, x.P, basis.j)
    vec = np.outer(bos, atom).ravel()
    return vec / np.linalg.norm(vec)


def coherent_overlap_squared(x: PhasePoint, y: PhasePoint, j: float) -> float:
    """|<x|y>|^2 = exp(-j|dq + i dp|^2/2) * ((1 + n_x . n_y)/2)^(2j)."""
    bos = np.exp(-j / 2 * ((x.q - y.q) ** 2 + (x.p - y.p) ** 2))
    return float(bos * ((1 + np.dot(bloch_vector(x), bloch_vector(y))) / 2) ** (2 * j))


def bloch_vector(x: PhasePoint) -> np.ndarray:
    """Unit vector on the Bloch sphere with cos(theta) = 1 - Z^2/2, azimuth arg(Q + iP)."""
    cos_t = np.clip(1 - x.Z2 / 2, -1.0, 1.0)
    sin_t = np.sqrt(1 - cos_t * cos_t)
    phi = np.arctan2(x.P, x.Q)
    return np.array([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t])
