"""Classical Dicke Hamiltonian on the four-dimensional phase space."""
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.optimize import minimize

from ..model.config import ModelParams
from ..utils.errors import BlochConstraintError
from ..utils.logger import get_logger

logger = get_logger(__name__)

BLOCH_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PhasePoint:
    """Point x = (q, p; Q, P) of the classical phase space.

    Attributes:
        q (float): Bosonic position quadrature.
        p (float): Bosonic momentum quadrature.
        Q (float): Bloch-disk coordinate.
        P (float): Bloch-disk coordinate.
    """
    q: float = 0.0
    p: float = 0.0
    Q: float = 0.0
    P: float = 0.0

    @property
    def Z2(self) -> float:
        return self.Q * self.Q + self.P * self.P

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p, self.Q, self.P], dtype=float)

    @classmethod
    def from_array(cls, values) -> "PhasePoint":
        q, p, Q, P = (float(v) for v in values)
        return cls(q, p, Q, P)

    def replace(self, **changes) -> "PhasePoint":
        fields = {"q": self.q, "p": self.p, "Q": self.Q, "P": self.P}
        fields.update(changes)
        return PhasePoint(**fields)


def check_bloch(Q, P) -> None:
    """Raise if any (Q, P) lies outside the Bloch disk."""
    z2 = np.asarray(Q, dtype=float) ** 2 + np.asarray(P, dtype=float) ** 2
    if np.any(z2 > 4 + BLOCH_TOLERANCE):
        raise BlochConstraintError(f"Q^2 + P^2 = {float(np.max(z2)):.6g} exceeds 4")


def coupling_coefficient(Q, P, params: ModelParams):
    """b = 2 gamma Q sqrt(1 - Z^2/4), the coefficient of q in h_cl."""
    z2 = np.asarray(Q) ** 2 + np.asarray(P) ** 2
    return 2 * params.gamma * np.asarray(Q) * np.sqrt(np.clip(1 - z2 / 4, 0.0, None))


def energy(points: np.ndarray, params: ModelParams) -> np.ndarray:
    """Vectorized h_cl over an array of shape (..., 4) ordered (q, p, Q, P)."""
    points = np.asarray(points, dtype=float)
    q, p, Q, P = (points[..., i] for i in range(4))
    check_bloch(Q, P)
    z2 = Q * Q + P * P
    return (params.omega / 2 * (q * q + p * p)
            + params.omega0 / 2 * z2
            + coupling_coefficient(Q, P, params) * q
            - params.omega0)


def h_cl(x: PhasePoint, params: ModelParams) -> float:
    """Scaled classical energy epsilon = <x|H_D|x>/j at x.

    Raises:
        BlochConstraintError: Q^2 + P^2 > 4.
    """
    return float(energy(x.as_array(), params))


def bloch_angles(Q, P) -> Tuple[np.ndarray, np.ndarray]:
    """Polar angles with cos(theta) = 1 - Z^2/2 and phi = atan2(-P, Q)."""
    Q = np.asarray(Q, dtype=float)
    P = np.asarray(P, dtype=float)
    cos_theta = np.clip(1 - (Q * Q + P * P) / 2, -1.0, 1.0)
    return np.arccos(cos_theta), np.arctan2(-P, Q)


def _reduced_energy(v: np.ndarray, params: ModelParams) -> float:
    q, Q = v
    return float(energy(np.array([q, 0.0, Q, 0.0]), params))


@lru_cache(maxsize=64)
def ground_state_energy(params: ModelParams) -> Tuple[float, PhasePoint]:
    """Global minimum of h_cl.

    The minimum lies at P = p = 0. Minimizing over q analytically leaves a
    quadratic in u = Q^2 whose stationary point is u* = 2 - omega*omega0/(2 gamma^2);
    for u* <= 0 (normal phase) the origin is the minimum. The analytic point is
    then polished with a bounded local minimization over (q, Q).

    Returns:
        Tuple[float, PhasePoint]: Ground-state energy and one minimizer (Q >= 0).
    """
    w, w0, g = params.omega, params.omega0, params.gamma
    u = 2 - w * w0 / (2 * g * g) if g > 0 else 0.0
    if u <= 0:
        return -w0, PhasePoint()

    Q0 = np.sqrt(u)
    q0 = -2 * g * Q0 * np.sqrt(1 - u / 4) / w
    e0 = -w0 - (g * g / (2 * w)) * u * u
    q_bound = 2 * g / w + 1.0
    result = minimize(_reduced_energy, x0=np.array([q0, Q0]), args=(params,),
                      method="L-BFGS-B", bounds=[(-q_bound, q_bound), (0.0, 2.0)],
                      options={"ftol": 1e-15, "gtol": 1e-12})
    if result.success and result.fun < e0:
        logger.debug(f"ground state refined by {e0 - result.fun:.3e}")
        q_opt, Q_opt = result.x
        return float(result.fun), PhasePoint(float(q_opt), 0.0, float(Q_opt), 0.0)
    return float(e0), PhasePoint(float(q0), 0.0, float(Q0), 0.0)
