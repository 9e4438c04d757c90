"""Photovoltaic power models estimated from cloud cover reports."""

__version__ = "0.1.0"

from .estimation import InitConfig, run_estimation
from .experiment import ExperimentConfig, Plant, run_dataset, run_experiment, run_monte_carlo
from .model import combined_power, regressor, theta
from .simulator import TrueSystem, simulate

__all__ = [
    "ExperimentConfig",
    "InitConfig",
    "Plant",
    "TrueSystem",
    "combined_power",
    "regressor",
    "run_dataset",
    "run_estimation",
    "run_experiment",
    "run_monte_carlo",
    "simulate",
    "theta",
]
