"""Experiment harness: configuration, pipelines and reproducible outputs."""
from .base_experiment import BaseExperiment
from .config import (EXPERIMENTS, ExperimentConfig, apply_overrides, config_from_dict,
                     config_hash, load_config)
from .experiments import EXPERIMENT_REGISTRY, create_experiment, run_experiment
from .export import write_outputs

__all__ = [
    "BaseExperiment", "EXPERIMENTS", "ExperimentConfig", "apply_overrides", "config_from_dict",
    "config_hash", "load_config", "EXPERIMENT_REGISTRY", "create_experiment", "run_experiment",
    "write_outputs",
]
