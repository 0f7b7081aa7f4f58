"""Pipelines behind the command-line subcommands, keyed by experiment tag."""
from pathlib import Path
from typing import Dict, Type

from ...utils.errors import ConfigError
from ..base_experiment import BaseExperiment
from ..config import ExperimentConfig
from .bound import BoundExperiment
from .diag import DiagExperiment
from .dos import DosExperiment
from .eigstats import EigstatsExperiment
from .evolution import EvolutionExperiment
from .profile import ProfileExperiment
from .saturation import SaturationExperiment
from .separation import SeparationExperiment

EXPERIMENT_REGISTRY: Dict[str, Type[BaseExperiment]] = {
    cls.tag: cls for cls in (DiagExperiment, EigstatsExperiment, EvolutionExperiment,
                             SeparationExperiment, SaturationExperiment, ProfileExperiment,
                             DosExperiment, BoundExperiment)
}


def create_experiment(config: ExperimentConfig) -> BaseExperiment:
    try:
        return EXPERIMENT_REGISTRY[config.experiment](config)
    except KeyError:
        raise ConfigError(f"no pipeline for experiment {config.experiment!r}") from None


def run_experiment(config: ExperimentConfig) -> Dict[str, Path]:
    return create_experiment(config).execute()


def _runner(tag: str):
    def run(config: ExperimentConfig) -> Dict[str, Path]:
        if config.experiment != tag:
            raise ConfigError(f"config is for {config.experiment!r}, not {tag!r}")
        return run_experiment(config)
    run.__name__ = f"run_{tag}"
    run.__doc__ = f"Run the {tag} pipeline and return the written paths."
    return run


run_diag = _runner("diag")
run_eigstats = _runner("eigstats")
run_evolution = _runner("evolve")
run_separation = _runner("separate")
run_saturation = _runner("saturate")
run_profile = _runner("profile")
run_dos = _runner("dos")
run_bound = _runner("bound")

__all__ = [
    "EXPERIMENT_REGISTRY", "create_experiment", "run_experiment", "run_diag", "run_eigstats",
    "run_evolution", "run_separation", "run_saturation", "run_profile", "run_dos", "run_bound",
    "BoundExperiment", "DiagExperiment", "DosExperiment", "EigstatsExperiment",
    "EvolutionExperiment", "ProfileExperiment", "SaturationExperiment", "SeparationExperiment",
]
