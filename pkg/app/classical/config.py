from dataclasses import dataclass

from ..utils.errors import ConfigError


@dataclass(frozen=True)
class MonteCarloConfig:
    """Budget and streams for Monte Carlo estimates.

    Attributes:
        n_samples (int): Number of draws. Defaults to 10^6.
        n_batches (int): Batches used for batch-means standard errors. Defaults to 20.
        seed (int): 64-bit key of the counter-based generator. Defaults to 0.
        block_size (int): Draws per counter block; fixes the stream layout. Defaults to 4096.
        p_sampling (str): "arcsine" or "uniform" density for p inside its bounding interval.
        jacobian_clamp (float): Roots with |dh/dq| below this are discarded. Defaults to 1e-8.
        workers (int): Threads used to generate blocks. Defaults to 1.
    """
    n_samples: int = 1_000_000
    n_batches: int = 20
    seed: int = 0
    block_size: int = 4096
    p_sampling: str = "arcsine"
    jacobian_clamp: float = 1e-8
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.n_batches < 2 or self.n_batches > self.n_samples:
            raise ConfigError("n_batches must lie in [2, n_samples]")
        if self.block_size < 1:
            raise ConfigError("block_size must be >= 1")
        if self.p_sampling not in ("arcsine", "uniform"):
            raise ConfigError(f"unknown p_sampling {self.p_sampling!r}")
        if self.jacobian_clamp <= 0:
            raise ConfigError("jacobian_clamp must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
