"""Sweeps, figure presets, file output and the command-line interface."""

from .oracle import OracleReport, oracle_check
from .output import emit_csv, emit_plot_script, read_csv
from .sweep import PRESETS, SpectrumRecord, SweepSpec, figure_preset, run_sweep, spec_from_config, spec_to_config

__all__ = [
    "OracleReport",
    "PRESETS",
    "SpectrumRecord",
    "SweepSpec",
    "emit_csv",
    "emit_plot_script",
    "figure_preset",
    "oracle_check",
    "read_csv",
    "run_sweep",
    "spec_from_config",
    "spec_to_config",
]
