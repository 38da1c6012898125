"""
MSE Sweep
=========
Runs the MSE-versus-transmit-power experiment over every configured
architecture and codebook strategy, and writes the result table.

Cell (power p, architecture a, strategy s) draws its trials from the seed
sequence addressed by (1, p, a, s) below the master seed; the random-unitary
codebook of (a, s) comes from (0, a, s). Results therefore do not depend on
the number of workers or the order in which cells finish.
"""

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..codebook import BaseKind, GroupTopology, TrainingCodebook, build_codebook, random_codebook
from ..codebook import uniform_groupings
from ..estimator import MseRecord, as_seed_sequence, child_generator, child_sequence
from ..estimator import empirical_mse, training_pinv
from ..linalg import UnsupportedOrderError
from .config import ExperimentConfig

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'power_dbm', 'G', 'M_bar', 'strategy',
    'empirical_mse', 'theoretical_mse', 'lower_bound', 'n_trials',
]
FLOAT_FORMAT = '%.10g'

_CODEBOOK_STREAM = 0
_TRIAL_STREAM = 1


@dataclass(frozen=True, eq=False)
class PreparedCodebook:
    """A codebook and its pseudo-inverse, shared by all power points."""
    requested: BaseKind
    codebook: TrainingCodebook
    pinv: np.ndarray


def prepare_codebook(
    top: GroupTopology,
    kind: BaseKind,
    master: np.random.SeedSequence,
    arch_index: int,
    strategy_index: int
) -> PreparedCodebook:
    """
    Build the codebook used for one (architecture, strategy) pair.

    Hadamard at an order that is not a power of two falls back to DFT; the
    caller keeps reporting the requested strategy.
    """
    if kind is BaseKind.RANDOM_UNITARY:
        rng = child_generator(master, _CODEBOOK_STREAM, arch_index, strategy_index)
        cb = random_codebook(top, rng)
    else:
        try:
            cb = build_codebook(top, kind)
        except UnsupportedOrderError as exc:
            logger.warning(f"{top.label}: {exc}; falling back to the DFT construction")
            cb = build_codebook(top, BaseKind.DFT)
    return PreparedCodebook(requested=kind, codebook=cb, pinv=training_pinv(cb))


def _run_cell(
    cfg: ExperimentConfig,
    master: np.random.SeedSequence,
    cell: Tuple[int, int, int],
    power_dbm: float,
    prepared: PreparedCodebook
) -> MseRecord:
    p_idx, a_idx, s_idx = cell
    cb = prepared.codebook
    lb = cfg.link_budget.with_tx_power(power_dbm)
    record = empirical_mse(
        cb.topology,
        lb,
        cb,
        n_trials=cfg.n_trials,
        rng=child_sequence(master, _TRIAL_STREAM, p_idx, a_idx, s_idx),
        pinv=prepared.pinv,
    )
    if record.strategy is not prepared.requested:
        record = dataclasses.replace(record, strategy=prepared.requested)
    logger.info(
        f"P={power_dbm:g} dBm {cb.topology.label} {prepared.requested.value}: "
        f"empirical {record.empirical_mse:.4e}, bound {record.lower_bound:.4e}"
    )
    return record


def run_sweep(cfg: ExperimentConfig, workers: Optional[int] = None) -> List[MseRecord]:
    """
    Run the full sweep.

    Args:
        cfg: Validated experiment configuration
        workers: Thread count overriding ``cfg.workers``

    Returns:
        One MseRecord per (power, architecture, strategy), ordered by power,
        then architecture, then strategy as configured
    """
    cfg.validate()
    workers = cfg.workers if workers is None else workers
    master = as_seed_sequence(cfg.master_seed)
    powers = cfg.powers()
    topologies = cfg.topologies()

    prepared: Dict[Tuple[int, int], PreparedCodebook] = {}
    for a_idx, top in enumerate(topologies):
        for s_idx, kind in enumerate(cfg.strategies):
            prepared[(a_idx, s_idx)] = prepare_codebook(top, kind, master, a_idx, s_idx)

    cells = [
        ((p_idx, a_idx, s_idx), power)
        for p_idx, power in enumerate(powers)
        for a_idx in range(len(topologies))
        for s_idx in range(len(cfg.strategies))
    ]
    logger.info(
        f"Sweeping {len(powers)} powers x {len(topologies)} architectures x "
        f"{len(cfg.strategies)} strategies, {cfg.n_trials} trials each ({workers} workers)"
    )

    def run(item):
        cell, power = item
        return _run_cell(cfg, master, cell, power, prepared[cell[1:]])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, cells))
    return [run(item) for item in cells]


def records_to_frame(records: List[MseRecord]) -> pd.DataFrame:
    """Tabulate records with the CSV column layout."""
    rows = [
        {
            'power_dbm': r.tx_power_dbm,
            'G': r.architecture[0],
            'M_bar': r.architecture[1],
            'strategy': r.strategy.value,
            'empirical_mse': r.empirical_mse,
            'theoretical_mse': r.theoretical_mse,
            'lower_bound': r.lower_bound,
            'n_trials': r.n_trials,
        }
        for r in records
    ]
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    return frame.astype({'power_dbm': float, 'G': int, 'M_bar': int, 'n_trials': int})


def write_csv(records: List[MseRecord], path: Union[str, Path]) -> Path:
    """Write the sweep table; floats carry 10 significant digits."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    records_to_frame(records).to_csv(
        path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n'
    )
    logger.info(f"Wrote {len(records)} rows to {path}")
    return path


def report_overhead(top: GroupTopology) -> Tuple[int, float]:
    """
    Training overhead and MSE multiplier of an architecture.

    Returns:
        (T_min, e_min_factor) = (G * M_bar^2, M_bar); the minimum MSE is
        e_min_factor * N * sigma^2 / P_u
    """
    return top.t_min, float(top.m_bar)


def overhead_table(m: int, n_bs: int = 4) -> pd.DataFrame:
    """Overhead and MSE multiplier for every uniform grouping of ``m`` ports."""
    rows = []
    for g, m_bar in uniform_groupings(m):
        t_min, factor = report_overhead(GroupTopology(n_bs=n_bs, g=g, m_bar=m_bar))
        rows.append({'G': g, 'M_bar': m_bar, 't_min': t_min, 'e_min_factor': factor})
    return pd.DataFrame(rows, columns=['G', 'M_bar', 't_min', 'e_min_factor'])
