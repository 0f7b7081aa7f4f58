"""Mixtures of coherent states: separated pairs and Bloch-disk saturation."""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from ..classical.phase_space import PhasePoint, bloch_angles, ground_state_energy, h_cl
from ..classical.sampling import block_generator
from ..classical.shell import branch_of, branch_root
from ..model.config import FockBasisSpec, ModelParams
from ..utils.errors import ConfigError, ShellEdgeError
from ..utils.logger import get_logger
from .coherent import coherent_fock_coefficients
from .dynamics import energy_moments
from .state import EnsembleState, PureState

logger = get_logger(__name__)

GOLDEN_ANGLE = np.pi * (3 - np.sqrt(5))
SHELL_TOLERANCE = 1e-6
MODES = ("atomic", "bosonic")


def _unit_vector(x: PhasePoint) -> np.ndarray:
    theta, phi = bloch_angles(x.Q, x.P)
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def phase_space_distance(x: PhasePoint, y: PhasePoint) -> float:
    """D = sqrt(dq^2 + dp^2 + Theta^2), Theta the great-circle angle between the Bloch points."""
    nx, ny = _unit_vector(x), _unit_vector(y)
    angle = np.arctan2(np.linalg.norm(np.cross(nx, ny)), np.dot(nx, ny))
    return float(np.sqrt((x.q - y.q) ** 2 + (x.p - y.p) ** 2 + angle ** 2))


@dataclass(frozen=True)
class PairMixture:
    """Equal-weight mixture of |x><x| and |y><y| at a target separation.

    Attributes:
        x (PhasePoint): Fixed centroid.
        y (PhasePoint): Displaced centroid on the same shell.
        target (float): Requested separation.
        distance (float): Achieved separation D(x, y).
        energy (float): h_cl(y).
        state (EnsembleState): The mixture.
        sigma (Optional[float]): Energy width of the mixture when a Hamiltonian was given.
    """
    x: PhasePoint
    y: PhasePoint
    target: float
    distance: float
    energy: float
    state: EnsembleState
    sigma: Optional[float] = None


def _shifted(x: PhasePoint, mode: str, s: float) -> Tuple[float, float, float]:
    if mode == "atomic":
        return x.p, x.Q + s, x.P
    return x.p + s, x.Q, x.P


def _partner(x: PhasePoint, mode: str, s: float, epsilon: float, params: ModelParams,
             branch: float) -> Optional[PhasePoint]:
    p, Q, P = _shifted(x, mode, s)
    if Q * Q + P * P > 4:
        return None
    q = branch_root(p, Q, P, epsilon, params, branch)
    return None if q is None else PhasePoint(q, p, Q, P)


def _scan(x: PhasePoint, mode: str, direction: float, epsilon: float, params: ModelParams,
          branch: float, n_scan: int) -> Tuple[np.ndarray, np.ndarray]:
    """Reachable displacements along one direction and their distances, up to the shell edge."""
    reach = 4.0 if mode == "atomic" else 2 * np.sqrt(2 / params.omega * (epsilon + params.omega0)
                                                     + 4 * params.gamma ** 2 / params.omega ** 2) + 1
    steps, dists = [0.0], [0.0]
    for s in direction * np.linspace(0, reach, n_scan)[1:]:
        y = _partner(x, mode, s, epsilon, params, branch)
        if y is None:
            break
        steps.append(s)
        dists.append(phase_space_distance(x, y))
    return np.array(steps), np.array(dists)


def _solve_displacement(x, mode, target, epsilon, params, branch, scans) -> PhasePoint:
    for steps, dists in scans:
        above = np.flatnonzero(dists >= target)
        if above.size == 0:
            continue
        i = above[0]
        if dists[i] == target:
            s = steps[i]
        else:
            s = brentq(lambda v: phase_space_distance(x, _partner(x, mode, v, epsilon, params, branch))
                       - target, steps[i - 1], steps[i], xtol=1e-14)
        return _partner(x, mode, s, epsilon, params, branch)
    reachable = max(float(d.max()) for _, d in scans)
    raise ShellEdgeError(f"separation D={target:.4f} not reachable in {mode} mode "
                         f"(shell edge at D={reachable:.4f})")


def separation_family(x_fixed: PhasePoint, mode: str, epsilon_M: float, D_grid: Sequence[float],
                      params: ModelParams, basis: FockBasisSpec, hamiltonian=None,
                      n_scan: int = 2000) -> List[PairMixture]:
    """Pair mixtures rho_M(D) = (|x><x| + |y><y|)/2 with y on the shell epsilon_M.

    The atomic mode moves Q_y and the bosonic mode moves p_y; q_y then follows
    the root branch of x so that it changes continuously. Positive displacements
    are tried first, then negative ones.

    Args:
        x_fixed (PhasePoint): Fixed centroid with h_cl(x_fixed) = epsilon_M.
        mode (str): "atomic" or "bosonic".
        epsilon_M (float): Shell energy.
        D_grid (Sequence[float]): Target separations.
        params (ModelParams): Model constants.
        basis (FockBasisSpec): Basis for the coherent states.
        hamiltonian: Optional Fock-basis Hamiltonian for energy widths.
        n_scan (int): Resolution of the displacement scan.

    Raises:
        ShellEdgeError: A target separation lies beyond the shell edge.
    """
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    if abs(h_cl(x_fixed, params) - epsilon_M) > SHELL_TOLERANCE:
        raise ConfigError(f"x_fixed is not on the shell epsilon={epsilon_M}")
    branch = branch_of(x_fixed, params)
    scans = [_scan(x_fixed, mode, d, epsilon_M, params, branch, n_scan) for d in (1.0, -1.0)]
    fixed_state = PureState(coherent_fock_coefficients(x_fixed, basis), basis=basis)

    family = []
    for target in D_grid:
        if target < 0:
            raise ConfigError("separations must be non-negative")
        y = x_fixed if target == 0 else _solve_displacement(x_fixed, mode, target, epsilon_M,
                                                           params, branch, scans)
        partner = fixed_state if y == x_fixed else PureState(coherent_fock_coefficients(y, basis),
                                                             basis=basis)
        state = EnsembleState([(0.5, fixed_state), (0.5, partner)])
        sigma = None if hamiltonian is None else energy_moments(state, hamiltonian)[1]
        family.append(PairMixture(x_fixed, y, float(target), phase_space_distance(x_fixed, y),
                                  h_cl(y, params), state, sigma))
        logger.debug(f"{mode} D={target:.3f}: y=({y.q:.4f}, {y.p:.4f}; {y.Q:.4f}, {y.P:.4f})")
    return family


@dataclass(frozen=True)
class BlochSaturation:
    """Equal-weight mixture of coherent states spread over the Bloch disk.

    Attributes:
        state (EnsembleState): The mixture.
        centroids (List[PhasePoint]): Centres of the members, all on the shell.
        adjusted (int): Lattice points pulled inward to reach a real q-root.
    """
    state: EnsembleState
    centroids: List[PhasePoint]
    adjusted: int


def sunflower_lattice(n: int, radius: float, rotation: float = 0.0) -> np.ndarray:
    """n points (Q, P) spread uniformly over a disk by golden-angle increments."""
    i = np.arange(n)
    r = radius * np.sqrt((i + 0.5) / n)
    angle = i * GOLDEN_ANGLE + rotation
    return np.column_stack([r * np.cos(angle), r * np.sin(angle)])


def _inner_anchor(epsilon: float, params: ModelParams) -> Tuple[float, float]:
    """Disk centre when the shell reaches it (epsilon >= -omega0), else the ground-state minimizer."""
    if epsilon >= -params.omega0:
        return 0.0, 0.0
    _, minimizer = ground_state_energy(params)
    return minimizer.Q, minimizer.P


def _place_on_shell(Q: float, P: float, anchor: Tuple[float, float], epsilon: float,
                    params: ModelParams, branch: float) -> Tuple[PhasePoint, bool]:
    """Put (Q, P) on the shell, bisecting toward ``anchor`` to the outermost feasible point."""
    q = branch_root(0.0, Q, P, epsilon, params, branch)
    if q is not None:
        return PhasePoint(q, 0.0, Q, P), False
    inner, outer = 0.0, 1.0
    for _ in range(60):
        mid = (inner + outer) / 2
        Qm, Pm = anchor[0] + mid * (Q - anchor[0]), anchor[1] + mid * (P - anchor[1])
        if branch_root(0.0, Qm, Pm, epsilon, params, branch) is None:
            outer = mid
        else:
            inner = mid
    Qi, Pi = anchor[0] + inner * (Q - anchor[0]), anchor[1] + inner * (P - anchor[1])
    return PhasePoint(branch_root(0.0, Qi, Pi, epsilon, params, branch), 0.0, Qi, Pi), True


def saturate_bloch(n: int, epsilon_M: float, params: ModelParams, basis: FockBasisSpec,
                   seed: int = 0, branch: float = 1.0) -> BlochSaturation:
    """Mixture of n coherent states with centroids filling a growing Bloch-disk area.

    Centroids (Q_i, P_i) form a golden-angle lattice on a disk of area
    min(4 pi, 4 pi n/(2j+1)), rotated by a seed-derived angle, with p_i = 0 and
    q_i on the chosen root branch of h_cl = epsilon_M. Points without a real
    root move radially inward to the nearest feasible radius. Shells below
    -omega0 do not reach the disk centre; there points move toward the
    ground-state minimizer instead.
    """
    if n < 1:
        raise ConfigError("n must be >= 1")
    radius = 2 * np.sqrt(min(1.0, n / (2 * params.j + 1)))
    rotation = 2 * np.pi * block_generator(seed, 0).random()
    anchor = _inner_anchor(epsilon_M, params)

    centroids, adjusted = [], 0
    for Q, P in sunflower_lattice(n, radius, rotation):
        point, moved = _place_on_shell(float(Q), float(P), anchor, epsilon_M, params, branch)
        centroids.append(point)
        adjusted += int(moved)
    if adjusted:
        logger.warning(f"{adjusted} of {n} centroids pulled inward to reach the shell")
    states = [PureState(coherent_fock_coefficients(x, basis), basis=basis) for x in centroids]
    return BlochSaturation(EnsembleState.equal_weights(states), centroids, adjusted)
