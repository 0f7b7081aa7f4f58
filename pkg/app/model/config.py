import math
from dataclasses import dataclass

from ..utils.errors import ConfigError


def _check_spin(j: float) -> None:
    if j < 0.5 or abs(2 * j - round(2 * j)) > 1e-12:
        raise ConfigError(f"j must be a positive integer or half-integer, got {j}")


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the Dicke Hamiltonian.

    Attributes:
        omega (float): Field frequency. Defaults to 1.
        omega0 (float): Atomic transition frequency. Defaults to 1.
        gamma (float): Atom-field coupling. Defaults to 1 (twice the critical value).
        j (float): Pseudo-spin length j = N/2. Defaults to 10.
    """
    omega: float = 1.0
    omega0: float = 1.0
    gamma: float = 1.0
    j: float = 10.0

    def __post_init__(self):
        if self.omega <= 0 or self.omega0 <= 0:
            raise ConfigError("omega and omega0 must be positive")
        if self.gamma < 0:
            raise ConfigError("gamma must be non-negative")
        _check_spin(self.j)

    @property
    def gamma_c(self) -> float:
        return math.sqrt(self.omega * self.omega0) / 2

    @property
    def hbar_eff(self) -> float:
        return 1.0 / self.j

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def phase_space_norm(self) -> float:
        """Integral of any Husimi function over the full phase space, C."""
        return (2 * math.pi / self.j) * (4 * math.pi / (2 * self.j + 1))


@dataclass(frozen=True)
class FockBasisSpec:
    """Truncated Fock basis |n> x |j, m_z>.

    Attributes:
        j (float): Pseudo-spin length.
        n_max (int): Highest photon number kept.
    """
    j: float
    n_max: int

    tag = "fock"

    def __post_init__(self):
        _check_spin(self.j)
        if self.n_max < 0:
            raise ConfigError("n_max must be non-negative")

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.levels * self.spin_dim

    def index(self, n: int, m_z: float) -> int:
        k = int(round(m_z + self.j))
        if not (0 <= n <= self.n_max and 0 <= k < self.spin_dim):
            raise ConfigError(f"(n={n}, m_z={m_z}) outside the basis")
        return n * self.spin_dim + k

    def quantum_numbers(self, index: int):
        n, k = divmod(int(index), self.spin_dim)
        return n, k - self.j


@dataclass(frozen=True)
class EfficientBasisSpec:
    """Displaced-oscillator basis |N> x |j, m_x>.

    Attributes:
        j (float): Pseudo-spin length.
        N_max (int): Highest modified-boson excitation kept.
    """
    j: float
    N_max: int

    tag = "efficient"

    def __post_init__(self):
        _check_spin(self.j)
        if self.N_max < 0:
            raise ConfigError("N_max must be non-negative")

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def levels(self) -> int:
        return self.N_max + 1

    @property
    def dim(self) -> int:
        return self.levels * self.spin_dim

    def index(self, N: int, m_x: float) -> int:
        k = int(round(m_x + self.j))
        if not (0 <= N <= self.N_max and 0 <= k < self.spin_dim):
            raise ConfigError(f"(N={N}, m_x={m_x}) outside the basis")
        return N * self.spin_dim + k

    def quantum_numbers(self, index: int):
        N, k = divmod(int(index), self.spin_dim)
        return N, k - self.j


def basis_from_tag(tag: str, j: float, truncation: int):
    """Rebuild a basis spec from its persisted tag and truncation."""
    if tag == FockBasisSpec.tag:
        return FockBasisSpec(j, truncation)
    if tag == EfficientBasisSpec.tag:
        return EfficientBasisSpec(j, truncation)
    raise ConfigError(f"unknown basis tag {tag!r}")
