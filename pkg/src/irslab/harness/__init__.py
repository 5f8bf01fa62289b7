"""Scenario configs, experiment registry, CSV output and command-line entry point."""

from .config import ConfigError, Scenario, dbm_to_watts, parse_scenario
from .csvio import emit_csv, read_csv, render_csv
from .experiments import EXPERIMENTS, ExperimentResult, UnknownExperiment, run_experiment

__all__ = ["ConfigError", "EXPERIMENTS", "ExperimentResult", "Scenario", "UnknownExperiment", "dbm_to_watts",
           "emit_csv", "parse_scenario", "read_csv", "render_csv", "run_experiment"]
