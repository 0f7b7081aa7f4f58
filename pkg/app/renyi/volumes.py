"""Renyi volumes of distributions and of Husimi functions on the full phase space."""

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammainc, xlogy

from ..classical.config import MonteCarloConfig
from ..classical.sampling import Estimate, batch_means, map_blocks
from ..husimi.evaluate import husimi_values
from ..model.config import ModelParams
from ..states.state import QuantumState
from ..utils.errors import ConfigError, ConvergenceError, NormalizationError
from ..utils.logger import get_logger
from .results import OccupationResult

logger = get_logger(__name__)

NORMALIZATION_TOLERANCE = 1e-10
MASS_TOLERANCE = 1e-6


def _check_alpha(alpha: float) -> float:
    if alpha < 0:
        raise ConfigError(f"alpha must be non-negative, got {alpha}")
    return float(alpha)


def renyi_volume(density: np.ndarray, measure: np.ndarray, alpha: float) -> float:
    """V_alpha = (sum_i mu_i phi_i^alpha)^(1/(1-alpha)) for a normalized density.

    alpha = 1 returns exp(-sum mu phi log phi) with 0 log 0 = 0 and alpha = 0
    the measure of the support.
    """
    alpha = _check_alpha(alpha)
    density = np.asarray(density, dtype=float)
    measure = np.broadcast_to(np.asarray(measure, dtype=float), density.shape)
    if np.any(density < 0):
        raise NormalizationError("density has negative entries")
    if alpha == 0:
        return float(np.sum(measure[density > 0]))
    if alpha == 1:
        return float(np.exp(-np.sum(measure * xlogy(density, density))))
    return float(np.sum(measure * density ** alpha) ** (1 / (1 - alpha)))


def renyi_volume_discrete(probabilities: np.ndarray, alpha: float) -> float:
    """Participation-ratio style volume of a probability vector.

    Raises:
        NormalizationError: entries negative or not summing to 1 within 1e-10.
    """
    probabilities = np.asarray(probabilities, dtype=float)
    total = probabilities.sum()
    if abs(total - 1) > NORMALIZATION_TOLERANCE:
        raise NormalizationError(f"probabilities sum to {total:.12f}")
    return renyi_volume(probabilities, 1.0, alpha)


def volume_from_moments(normalization: float, moment: float, alpha: float) -> float:
    """C^{alpha/(alpha-1)} I^{1/(1-alpha)}; for alpha = 1 ``moment`` is int Q log Q."""
    if alpha == 1:
        return float(normalization * np.exp(-moment / normalization))
    return float(normalization ** (alpha / (alpha - 1)) * moment ** (1 / (1 - alpha)))


def moment_integrand(values: np.ndarray, alpha: float) -> np.ndarray:
    if alpha == 0:
        return (values > 0).astype(float)
    if alpha == 1:
        return xlogy(values, values)
    return values ** alpha


def coherent_volume(alpha: float, hbar_eff: float) -> float:
    """Exact Renyi volume of a coherent state, the smallest over all states.

    alpha != 1: 8 pi^2 h^2 (h+2)^{alpha/(1-alpha)} (alpha(2alpha+h))^{1/(alpha-1)}.
    alpha = 1 is the continuous limit 8 pi^2 h^2 e^{(h+4)/(h+2)} / (h+2).
    """
    h = float(hbar_eff)
    if h <= 0:
        raise ConfigError("hbar_eff must be positive")
    if alpha <= 0:
        raise ConfigError("alpha must be positive")
    log_prefactor = np.log(8 * np.pi ** 2 * h * h)
    if alpha == 1:
        return float(np.exp(log_prefactor + (h + 4) / (h + 2) - np.log(h + 2)))
    # both exponents blow up near alpha = 1; their logs cancel
    return float(np.exp(log_prefactor + alpha / (1 - alpha) * np.log(h + 2)
                        + np.log(alpha * (2 * alpha + h)) / (alpha - 1)))


def photon_distribution(state: QuantumState) -> np.ndarray:
    weights, vectors = state.fock_decomposition()
    blocks = vectors.reshape(state.basis.levels, state.basis.spin_dim, -1)
    return np.einsum("nkr,r->n", np.abs(blocks) ** 2, weights)


def bosonic_radius(state: QuantumState, mass_tolerance: float = MASS_TOLERANCE) -> float:
    """Smallest R with Husimi mass >= 1 - tol inside q^2 + p^2 <= R^2.

    The captured mass is sum_n P(n) * P(n+1, j R^2/2) with P the regularized
    lower incomplete gamma function, since the angular integral removes
    coherences between photon numbers.
    """
    probs = photon_distribution(state)
    n = np.arange(probs.size)
    j = state.j

    def missing(radius: float) -> float:
        return 1 - float(np.dot(probs, gammainc(n + 1, j * radius * radius / 2))) - mass_tolerance

    upper = 1.0
    while missing(upper) > 0:
        upper *= 2
        if upper > 1e3:
            raise ConvergenceError("bounding radius diverged")
    return float(brentq(missing, 0.0, upper, xtol=1e-12))


def _box_block(rng: np.random.Generator, draws: range, radius: float) -> np.ndarray:
    u = rng.random((len(draws), 4))
    r_atom = 2 * np.sqrt(u[:, 0])
    r_bos = radius * np.sqrt(u[:, 2])
    a, b = 2 * np.pi * u[:, 1], 2 * np.pi * u[:, 3]
    return np.column_stack([r_bos * np.cos(b), r_bos * np.sin(b),
                            r_atom * np.cos(a), r_atom * np.sin(a)])


def renyi_volume_phase_space(state: QuantumState, alpha: float, mc: MonteCarloConfig,
                             params: ModelParams,
                             mass_tolerance: float = MASS_TOLERANCE) -> OccupationResult:
    """V_alpha(M, rho) by uniform Monte Carlo over Bloch disk x bosonic disk.

    The bosonic disk radius captures 1 - mass_tolerance of the Husimi mass;
    C is the exact normalization (2pi/j)(4pi/(2j+1)). The standard error is
    propagated from the batch-means error of the integral by the delta method.

    Returns:
        OccupationResult: ``value`` is the volume, ``reference_volume`` infinite.

    Raises:
        ConvergenceError: no bounded radius captures the mass.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0:
        raise ConfigError("the phase-space volume needs alpha > 0")
    radius = bosonic_radius(state, mass_tolerance)
    box_volume = 4 * np.pi * np.pi * radius * radius

    def block(rng, draws):
        points = _box_block(rng, draws, radius)
        values = husimi_values(state, points)
        return moment_integrand(values, alpha), values, np.asarray(draws, dtype=np.int64)

    blocks = map_blocks(block, mc)
    integrand = np.concatenate([b[0] for b in blocks])
    values = np.concatenate([b[1] for b in blocks])
    draws = np.concatenate([b[2] for b in blocks])
    moment = batch_means(integrand, draws, mc.n_samples, mc.n_batches)
    mass = batch_means(values, draws, mc.n_samples, mc.n_batches)
    moment = Estimate(moment.value * box_volume, moment.stderr * box_volume)

    C = params.phase_space_norm
    volume = volume_from_moments(C, moment.value, alpha)
    if alpha == 1:
        stderr = volume * moment.stderr / C
    else:
        stderr = abs(volume / ((1 - alpha) * moment.value)) * moment.stderr
    captured = mass.value * box_volume / C
    logger.debug(f"phase-space volume alpha={alpha}: R={radius:.4f}, captured mass {captured:.5f}")
    return OccupationResult(value=volume, alpha=alpha, reference_volume=float("inf"),
                            normalization=C, stderr=float(stderr), volume=volume,
                            config={"n_samples": mc.n_samples, "n_batches": mc.n_batches,
                                    "seed": mc.seed, "radius": radius,
                                    "captured_mass": captured})


def coherent_lower_bound(alpha: float, hbar_eff: float) -> float:
    """Lower bound V_alpha(M, rho) >= ``coherent_volume`` in its informative range.

    Raises:
        ConfigError: alpha < 100 hbar_eff^2, where the bound is not informative.
    """
    if alpha < 100 * hbar_eff * hbar_eff:
        raise ConfigError(f"alpha={alpha} below the validity floor {100 * hbar_eff * hbar_eff:.3g}")
    return coherent_volume(alpha, hbar_eff)
