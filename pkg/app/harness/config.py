import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..classical.config import MonteCarloConfig
from ..model.config import FockBasisSpec, ModelParams, basis_from_tag
from ..utils.errors import ConfigError

EXPERIMENTS = ("diag", "eigstats", "evolve", "separate", "saturate", "profile", "dos", "bound")

# chaotic shell point used by the dynamics, separation and saturation runs
DEFAULT_POINT = [2.894, 0.0, -0.4, 0.0]


@dataclass
class ExperimentConfig:
    """Configuration of one pipeline run.

    Attributes:
        experiment (str): One of diag, eigstats, evolve, separate, saturate, profile, dos, bound.
        model (ModelParams): Hamiltonian constants. Defaults to omega = omega0 = gamma = 1, j = 10.
        basis (str): "fock" or "efficient". Husimi-based runs need "fock".
        n_max (int): Bosonic truncation (n_max or N_max). Defaults to 120.
        e_cutoff (Optional[float]): Scaled-energy cutoff for partial solves above ``dense_limit``.
        dense_limit (int): Largest dimension diagonalized densely. Defaults to 4000.
        use_parity (bool): Solve parity blocks separately. Defaults to False.
        guard_fraction (float): Top fraction of bosonic levels used by the convergence test.
        threshold (float): Largest guard-band weight of a converged eigenstate.
        seed (int): Key of every random stream in the run.
        alphas (List[float]): Renyi orders. Defaults to [0.5, 1, 2, 3].
        shell_samples (int): Draws per energy-shell sample. Defaults to 20000.
        n_batches (int): Batches for standard errors. Defaults to 20.
        resolution (int): Atomic-grid nodes per coherent width. Defaults to 8.
        workers (int): Worker threads. Defaults to 1.
        out_dir (str): Output directory. Defaults to "results".
        save_spectrum (Optional[str]): Path to store the diagonalized spectrum.
        load_spectrum (Optional[str]): Path of a stored spectrum to reuse.
        full_scale (bool): j = 30 production settings.
        energy_window (List[float]): Scaled-energy window of eigstats.
        k_window (Optional[List[int]]): Explicit eigenstate index window, overrides ``energy_window``.
        n_bins (int): Histogram bins for eigstats.
        point (List[float]): Initial coherent state (q, p, Q, P).
        t_max (float): Last time of the evolution grid.
        n_times (int): Points of the evolution and averaging grid.
        heatmap_times (List[float]): Times at which projection heatmaps are written.
        heatmap (bool): Write projection heatmaps of every separation and saturation member.
        heatmap_points (int): Raster points per axis of the heatmaps. Defaults to 101.
        mode (str): Separation mode, "atomic" or "bosonic".
        separations (List[float]): Target separations D.
        n_grid (List[int]): Ensemble sizes of the saturation run.
        epsilon_grid (List[float]): Energies of the dos run.
        profile_grid (List[float]): Energies of the profile run.
        profile_states (List[int]): Eigenstate indices whose energy profile is computed.
        dos_samples (int): Draws of the density-of-states estimate.
        fd_samples (int): Draws of the finite-difference oracle.
        fd_delta (float): Half-width of the finite-difference energy window.
        n_random (int): Random states in the bound sweep.
        bound_n_max (int): Photon truncation of the random states.
        bound_samples (int): Monte Carlo draws per phase-space volume.
    """
    experiment: str = "eigstats"
    model: ModelParams = field(default_factory=ModelParams)
    basis: str = "fock"
    n_max: int = 120
    e_cutoff: Optional[float] = None
    dense_limit: int = 4000
    use_parity: bool = False
    guard_fraction: float = 0.1
    threshold: float = 1e-8
    seed: int = 0
    alphas: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0, 3.0])
    shell_samples: int = 20_000
    n_batches: int = 20
    resolution: int = 8
    workers: int = 1
    out_dir: str = "results"
    save_spectrum: Optional[str] = None
    load_spectrum: Optional[str] = None
    full_scale: bool = False
    energy_window: List[float] = field(default_factory=lambda: [1.0, 1.274])
    k_window: Optional[List[int]] = None
    n_bins: int = 20
    point: List[float] = field(default_factory=lambda: list(DEFAULT_POINT))
    t_max: float = 40.0
    n_times: int = 81
    heatmap_times: List[float] = field(default_factory=list)
    heatmap: bool = False
    heatmap_points: int = 101
    mode: str = "bosonic"
    separations: List[float] = field(default_factory=lambda: [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5])
    n_grid: List[int] = field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64])
    epsilon_grid: List[float] = field(default_factory=lambda: [-1.5, -0.5, 1.0])
    profile_grid: List[float] = field(default_factory=lambda: [round(0.1 * i, 1) for i in range(21)])
    profile_states: List[int] = field(default_factory=list)
    dos_samples: int = 1_000_000
    fd_samples: int = 20_000_000
    fd_delta: float = 1e-2
    n_random: int = 100
    bound_n_max: int = 4
    bound_samples: int = 200_000

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.basis not in ("fock", "efficient"):
            raise ConfigError(f"unknown basis {self.basis!r}")
        if self.mode not in ("atomic", "bosonic"):
            raise ConfigError(f"unknown separation mode {self.mode!r}")
        if any(a < 0 for a in self.alphas) or not self.alphas:
            raise ConfigError("alphas must be a non-empty list of non-negative orders")
        if len(self.energy_window) != 2 or self.energy_window[0] > self.energy_window[1]:
            raise ConfigError("energy_window must be [low, high]")
        if self.k_window is not None and (len(self.k_window) != 2 or self.k_window[0] > self.k_window[1]):
            raise ConfigError("k_window must be [first, last]")
        if len(self.point) != 4:
            raise ConfigError("point must be [q, p, Q, P]")
        if list(self.n_grid) != sorted(self.n_grid) or min(self.n_grid, default=1) < 1:
            raise ConfigError("n_grid must be ascending positive integers")
        if self.n_times < 1 or self.t_max < 0:
            raise ConfigError("time grid needs n_times >= 1 and t_max >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.heatmap_points < 2:
            raise ConfigError("heatmap_points must be >= 2")

    @property
    def params(self) -> ModelParams:
        return self.model

    def basis_spec(self):
        return basis_from_tag(self.basis, self.model.j, self.n_max)

    def fock_basis(self) -> FockBasisSpec:
        if self.basis != "fock":
            raise ConfigError(f"the {self.experiment} run evaluates Husimi functions and needs the Fock basis")
        return self.basis_spec()

    def shell_mc(self) -> MonteCarloConfig:
        return MonteCarloConfig(n_samples=self.shell_samples, n_batches=self.n_batches,
                                seed=self.seed, workers=self.workers)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


FULL_SCALE = {"model": {"j": 30.0}, "n_max": 260, "e_cutoff": 1.8, "dense_limit": 4000,
              "shell_samples": 50_000}


def _coerce(raw: Dict[str, Any]) -> Dict[str, Any]:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    values = dict(raw)
    if isinstance(values.get("model"), dict):
        try:
            values["model"] = ModelParams(**values["model"])
        except TypeError as exc:
            raise ConfigError(f"invalid model section: {exc}") from exc
    return values


def config_from_dict(raw: Dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig(**_coerce(raw))
    except TypeError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read an ExperimentConfig from a JSON file (keys as in the dataclass, ``model`` nested)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    return config_from_dict(raw)


def apply_overrides(config: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Return a copy with every non-None override applied; flags win over the file.

    ``j`` updates the model, ``full_scale`` applies the j = 30 preset first.
    """
    overrides = {k: v for k, v in overrides.items() if v is not None}
    values = config.to_dict()
    values["model"] = asdict(config.model)
    if overrides.pop("full_scale", False):
        values["full_scale"] = True
        values["model"].update(FULL_SCALE["model"])
        values.update({k: v for k, v in FULL_SCALE.items() if k != "model"})
    if "j" in overrides:
        values["model"]["j"] = float(overrides.pop("j"))
    values.update(overrides)
    return config_from_dict(values)


def config_hash(config: ExperimentConfig) -> str:
    """sha256 of the canonical JSON of the config, ignoring worker count and output location."""
    payload = config.to_dict()
    for key in ("workers", "out_dir"):
        payload.pop(key, None)
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
