"""Energy-shell geometry, shell sampling and the semiclassical density of states.

The delta function delta(h_cl - eps) is resolved in q, where h_cl is an exact
quadratic. For fixed (Q, P) the (q, p) section of the shell is a circle of
radius^2 = (2/omega)(eps - c0 + b^2/(2 omega)) centred at q = -b/omega, so p is
bounded by that radius.
"""
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..model.config import ModelParams
from ..utils.errors import ZeroVolumeError
from ..utils.io import write_json, write_table
from ..utils.logger import get_logger
from .config import MonteCarloConfig
from .phase_space import PhasePoint, check_bloch, coupling_coefficient, ground_state_energy
from .sampling import Estimate, batch_estimates, batch_means, map_blocks

logger = get_logger(__name__)

BLOCH_DISK_AREA = 4 * np.pi
GROUND_STATE_TOLERANCE = 1e-12


def _offset(Q, P, params: ModelParams):
    """c0 = omega0 Z^2/2 - omega0, the p- and q-independent part of h_cl."""
    z2 = np.asarray(Q) ** 2 + np.asarray(P) ** 2
    return params.omega0 * z2 / 2 - params.omega0


def p_bound(Q, P, epsilon: float, params: ModelParams):
    """Largest |p| at which the shell has real q-roots for fixed (Q, P)."""
    b = coupling_coefficient(Q, P, params)
    radius2 = (2 / params.omega) * (epsilon - _offset(Q, P, params) + b * b / (2 * params.omega))
    return np.sqrt(np.clip(radius2, 0.0, None))


def _quadratic_roots(b, const, omega: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Roots of (omega/2) q^2 + b q + const = 0 and sqrt of the discriminant.

    Uses the cancellation-free form t = -(b + sign(b) sqrt(disc))/2, roots
    t/(omega/2) and const/t.
    """
    b = np.asarray(b, dtype=float)
    const = np.asarray(const, dtype=float)
    disc = b * b - 2 * omega * const
    root_disc = np.sqrt(np.clip(disc, 0.0, None))
    sign = np.where(b >= 0, 1.0, -1.0)
    t = -(b + sign * root_disc) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        first = t / (omega / 2)
        second = np.where(t != 0, const / t, -first)
    return first, second, np.where(disc > 0, root_disc, 0.0)


def shell_roots_q(p: float, Q: float, P: float, epsilon: float, params: ModelParams,
                  clamp: float = 1e-8) -> List[Tuple[float, float]]:
    """q-roots of h_cl(q, p; Q, P) = epsilon with weights 1/|dh_cl/dq|.

    Double roots and roots with |dh_cl/dq| below ``clamp`` are dropped.

    Returns:
        List[Tuple[float, float]]: Zero or two (q_root, weight) pairs, ascending in q.
    """
    check_bloch(Q, P)
    b = coupling_coefficient(Q, P, params)
    const = params.omega * p * p / 2 + _offset(Q, P, params) - epsilon
    first, second, root_disc = _quadratic_roots(b, const, params.omega)
    if root_disc <= 0 or root_disc < clamp:
        return []
    weight = 1.0 / float(root_disc)
    return sorted([(float(first), weight), (float(second), weight)])


@dataclass(frozen=True)
class ShellSample:
    """Weighted point sample of the energy shell M_eps.

    The weighted empirical measure (weights / n_samples) * box_volume
    converges to dV = delta(h_cl - eps) dx.

    Attributes:
        points (np.ndarray): (M, 4) array of shell points ordered (q, p, Q, P).
        weights (np.ndarray): Positive weights, one per point.
        draws (np.ndarray): Index of the draw that produced each point.
        epsilon (float): Shell energy.
        seed (int): Generator key.
        n_samples (int): Number of (Q, P, p) draws, empty draws included.
        n_batches (int): Batches for standard errors.
        box (Dict): Sampling-region descriptor.
    """
    points: np.ndarray
    weights: np.ndarray
    draws: np.ndarray
    epsilon: float
    seed: int
    n_samples: int
    n_batches: int
    box: Dict = field(default_factory=dict)

    @property
    def box_volume(self) -> float:
        return float(self.box.get("volume", BLOCH_DISK_AREA))

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def phase_points(self) -> Iterator[PhasePoint]:
        for row in self.points:
            yield PhasePoint.from_array(row)

    def integrate(self, values: np.ndarray) -> Estimate:
        """Estimate the shell integral of f from its values at ``points``."""
        values = np.asarray(values, dtype=float)
        est = batch_means(self.weights * values, self.draws, self.n_samples, self.n_batches)
        return Estimate(est.value * self.box_volume, est.stderr * self.box_volume)

    def batch_integrals(self, values: np.ndarray) -> np.ndarray:
        """Per-batch estimates of the shell integral of f."""
        values = np.asarray(values, dtype=float)
        return self.box_volume * batch_estimates(self.weights * values, self.draws,
                                                 self.n_samples, self.n_batches)

    def volume(self) -> Estimate:
        """Estimate of V(M_eps) = 4 pi^2 nu(eps)."""
        return self.integrate(np.ones(self.size))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "q": self.points[:, 0], "p": self.points[:, 1],
            "Q": self.points[:, 2], "P": self.points[:, 3],
            "weight": self.weights, "draw": self.draws,
        })

    def metadata(self) -> Dict:
        return {"epsilon": self.epsilon, "seed": self.seed, "n_samples": self.n_samples,
                "n_batches": self.n_batches, "n_points": self.size, "box": self.box}


def save_shell_sample(sample: ShellSample, path: Union[str, Path]) -> Path:
    """Write ``<path>.csv`` (q, p, Q, P, weight, draw) and ``<path>.json`` metadata."""
    path = Path(path).with_suffix("")
    write_json(sample.metadata(), path.with_suffix(".json"))
    return write_table(sample.to_frame(), path.with_suffix(".csv"))


def _check_above_ground(epsilon: float, params: ModelParams) -> float:
    e_gs, _ = ground_state_energy(params)
    if epsilon <= e_gs + GROUND_STATE_TOLERANCE:
        raise ZeroVolumeError(f"epsilon={epsilon:.6g} is not above the ground-state energy {e_gs:.6g}")
    return e_gs


def _uniform_disk(u_radius: np.ndarray, u_angle: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    radius = 2 * np.sqrt(u_radius)
    angle = 2 * np.pi * u_angle
    return radius * np.cos(angle), radius * np.sin(angle)


class _ShellBlock(NamedTuple):
    points: np.ndarray
    weights: np.ndarray
    draws: np.ndarray


def _shell_block(rng: np.random.Generator, draws: range, epsilon: float,
                 params: ModelParams, mc: MonteCarloConfig) -> _ShellBlock:
    u = rng.random((len(draws), 3))
    Q, P = _uniform_disk(u[:, 0], u[:, 1])
    b = coupling_coefficient(Q, P, params)
    c0 = _offset(Q, P, params)
    p_max = p_bound(Q, P, epsilon, params)

    if mc.p_sampling == "arcsine":
        p = p_max * np.sin(np.pi * (u[:, 2] - 0.5))
        inv_density = np.pi * np.sqrt(np.clip(p_max * p_max - p * p, 0.0, None))
    else:
        p = p_max * (2 * u[:, 2] - 1)
        inv_density = 2 * p_max

    const = params.omega * p * p / 2 + c0 - epsilon
    first, second, root_disc = _quadratic_roots(b, const, params.omega)
    keep = (p_max > 0) & (root_disc >= mc.jacobian_clamp)

    idx = np.flatnonzero(keep)
    weight = inv_density[idx] / root_disc[idx]
    # each draw contributes both roots, kept adjacent
    q = np.column_stack([first[idx], second[idx]]).ravel()
    rest = np.repeat(np.column_stack([p, Q, P])[idx], 2, axis=0)
    draw_ids = np.asarray(draws, dtype=np.int64)[idx]
    return _ShellBlock(np.column_stack([q, rest]), np.repeat(weight, 2), np.repeat(draw_ids, 2))


def _collect(blocks: List[_ShellBlock]) -> _ShellBlock:
    if not blocks:
        return _ShellBlock(np.empty((0, 4)), np.empty(0), np.empty(0, dtype=np.int64))
    return _ShellBlock(np.concatenate([b.points for b in blocks]),
                       np.concatenate([b.weights for b in blocks]),
                       np.concatenate([b.draws for b in blocks]))


def sample_shell(epsilon: float, n_samples: int, seed: int, params: ModelParams,
                 mc: Optional[MonteCarloConfig] = None) -> ShellSample:
    """Draw a weighted sample of the energy shell at ``epsilon``.

    (Q, P) are uniform on the Bloch disk and p follows ``mc.p_sampling`` on
    [-p_max, p_max]; each draw expands into its q-roots. Deterministic given
    the seed, independent of ``mc.workers``.

    Args:
        epsilon (float): Scaled shell energy, above the ground-state energy.
        n_samples (int): Number of draws.
        seed (int): Generator key.
        params (ModelParams): Model constants.
        mc (Optional[MonteCarloConfig]): Remaining sampler settings.

    Raises:
        ZeroVolumeError: epsilon at or below the ground-state energy.
    """
    _check_above_ground(epsilon, params)
    mc = replace(mc or MonteCarloConfig(), n_samples=int(n_samples), seed=int(seed))
    block = _collect(map_blocks(lambda rng, draws: _shell_block(rng, draws, epsilon, params, mc), mc))
    box = {"kind": "bloch-disk x p-interval", "volume": BLOCH_DISK_AREA,
           "p_sampling": mc.p_sampling, "jacobian_clamp": mc.jacobian_clamp}
    logger.debug(f"shell eps={epsilon:.4f}: {block.weights.size} points from {mc.n_samples} draws")
    return ShellSample(block.points, block.weights, block.draws, float(epsilon),
                       mc.seed, mc.n_samples, mc.n_batches, box)


def density_of_states(epsilon: float, params: ModelParams,
                      mc: Optional[MonteCarloConfig] = None) -> Estimate:
    """Semiclassical density of states nu(eps) = V(M_eps)/(4 pi^2).

    Returns:
        Estimate: (nu, stderr) with the stderr from batch means.

    Raises:
        ZeroVolumeError: epsilon at or below the ground-state energy.
    """
    mc = mc or MonteCarloConfig()
    volume = sample_shell(epsilon, mc.n_samples, mc.seed, params, mc).volume()
    scale = 4 * np.pi ** 2
    return Estimate(volume.value / scale, volume.stderr / scale)


def bounding_box(epsilon: float, params: ModelParams) -> Dict:
    """Box containing {h_cl <= epsilon}: Bloch disk x |q| <= q_max x |p| <= r_max."""
    w = params.omega
    r_max = np.sqrt(max(0.0, (2 / w) * (epsilon + params.omega0 + 2 * params.gamma ** 2 / w)))
    q_max = 2 * params.gamma / w + r_max
    return {"kind": "bloch-disk x q-p box", "q_max": float(q_max), "p_max": float(r_max),
            "volume": float(BLOCH_DISK_AREA * 4 * q_max * r_max)}


def _box_energies(rng: np.random.Generator, draws: range, box: Dict,
                  params: ModelParams) -> Tuple[np.ndarray, np.ndarray]:
    u = rng.random((len(draws), 4))
    Q, P = _uniform_disk(u[:, 0], u[:, 1])
    q = box["q_max"] * (2 * u[:, 2] - 1)
    p = box["p_max"] * (2 * u[:, 3] - 1)
    h = (params.omega / 2 * (q * q + p * p) + coupling_coefficient(Q, P, params) * q
         + _offset(Q, P, params))
    return h, np.asarray(draws, dtype=np.int64)


def _box_fraction(lower: float, upper: float, box: Dict, params: ModelParams,
                  mc: MonteCarloConfig) -> Estimate:
    blocks = map_blocks(lambda rng, draws: _box_energies(rng, draws, box, params), mc)
    h = np.concatenate([b[0] for b in blocks])
    draws = np.concatenate([b[1] for b in blocks])
    inside = ((h > lower) & (h <= upper)).astype(float)
    return batch_means(inside, draws, mc.n_samples, mc.n_batches)


def phase_space_volume_below(epsilon: float, params: ModelParams,
                             mc: Optional[MonteCarloConfig] = None) -> Estimate:
    """Phi(eps) = Vol{x : h_cl(x) <= eps} by rejection sampling in ``bounding_box``.

    Returns:
        Estimate: (Phi, stderr). Exactly zero at the ground-state energy.

    Raises:
        ZeroVolumeError: epsilon below the ground-state energy.
    """
    mc = mc or MonteCarloConfig()
    e_gs, _ = ground_state_energy(params)
    if epsilon < e_gs - GROUND_STATE_TOLERANCE:
        raise ZeroVolumeError(f"epsilon={epsilon:.6g} is below the ground-state energy {e_gs:.6g}")
    if epsilon <= e_gs + GROUND_STATE_TOLERANCE:
        return Estimate(0.0, 0.0)
    box = bounding_box(epsilon, params)
    frac = _box_fraction(-np.inf, epsilon, box, params, mc)
    return Estimate(frac.value * box["volume"], frac.stderr * box["volume"])


def finite_difference_density(epsilon: float, params: ModelParams,
                              mc: Optional[MonteCarloConfig] = None,
                              delta: float = 1e-2) -> Estimate:
    """nu(eps) ~ [Phi(eps + delta) - Phi(eps - delta)] / (2 delta 4 pi^2).

    Both volumes share the same draws, so the difference is a direct count
    of box samples with eps - delta < h_cl <= eps + delta.
    """
    mc = mc or MonteCarloConfig()
    _check_above_ground(epsilon, params)
    box = bounding_box(epsilon + delta, params)
    frac = _box_fraction(epsilon - delta, epsilon + delta, box, params, mc)
    scale = box["volume"] / (2 * delta * 4 * np.pi ** 2)
    return Estimate(frac.value * scale, frac.stderr * scale)


def weyl_count(epsilon: float, params: ModelParams,
               mc: Optional[MonteCarloConfig] = None) -> Estimate:
    """Semiclassical number of states below eps, Phi(eps) / C = j(2j+1)/2 * int nu."""
    phi = phase_space_volume_below(epsilon, params, mc)
    norm = params.phase_space_norm
    return Estimate(phi.value / norm, phi.stderr / norm)


def branch_root(p: float, Q: float, P: float, epsilon: float, params: ModelParams,
                branch: float) -> Optional[float]:
    """q-root of h_cl = epsilon with sign(dh_cl/dq) = sign(branch), or None.

    Following one sign of dh_cl/dq = omega q + b keeps the root continuous
    as (p, Q, P) move, until the shell edge where the discriminant vanishes.
    """
    b = coupling_coefficient(Q, P, params)
    const = params.omega * p * p / 2 + _offset(Q, P, params) - epsilon
    if b * b - 2 * params.omega * const < 0:
        return None
    first, second, _ = _quadratic_roots(b, const, params.omega)
    for q in (float(first), float(second)):
        if (params.omega * q + b >= 0) == (branch >= 0):
            return q
    return float(first)


def branch_of(x: PhasePoint, params: ModelParams) -> float:
    """Sign of dh_cl/dq at x, +1 when it vanishes."""
    slope = params.omega * x.q + float(coupling_coefficient(x.Q, x.P, params))
    return 1.0 if slope >= 0 else -1.0
