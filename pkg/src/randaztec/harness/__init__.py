from .config import ConfigError, ExperimentConfig, load_config, make_config
from .experiments import (MomentReport, run_clt_experiment, run_experiment,
                          run_lln_experiment, run_multilevel_experiment, sample_moments)
from .io import RunManifest

__all__ = ["ConfigError", "ExperimentConfig", "MomentReport", "RunManifest", "load_config",
           "make_config", "run_clt_experiment", "run_experiment", "run_lln_experiment",
           "run_multilevel_experiment", "sample_moments"]
