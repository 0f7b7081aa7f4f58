__version__ = "0.1.0"

from .harness import ExperimentConfig, load_config, run_experiment
from .model import ModelParams

__all__ = ['__version__', 'ExperimentConfig', 'ModelParams', 'load_config', 'run_experiment']
