"""
Harness Module
==============
Experiment orchestration for the BD-RIS simulator:
- Flat key=value configuration with command-line overrides
- Seeded MSE-versus-power sweeps and CSV output
- Training-overhead report
- The ``bdris-sim`` command-line entry point
"""

from .config import (
    ConfigError,
    ExperimentConfig,
    config_from_mapping,
    load_config,
    parse_architecture,
    parse_powers,
    parse_strategy,
)
from .sweep import (
    CSV_COLUMNS,
    PreparedCodebook,
    overhead_table,
    prepare_codebook,
    records_to_frame,
    report_overhead,
    run_sweep,
    write_csv,
)

__all__ = [
    'ConfigError',
    'ExperimentConfig',
    'config_from_mapping',
    'load_config',
    'parse_architecture',
    'parse_powers',
    'parse_strategy',
    'CSV_COLUMNS',
    'PreparedCodebook',
    'overhead_table',
    'prepare_codebook',
    'records_to_frame',
    'report_overhead',
    'run_sweep',
    'write_csv',
]
