"""
Monte Carlo MSE
===============
Empirical LS estimation error averaged over independent channel and noise
draws, alongside the closed-form MSE and its lower bound.

Trials are evaluated in batches for BLAS efficiency; every trial still owns a
generator derived from the base seed and its trial index, so the draws of a
trial do not depend on how trials are batched or scheduled.
"""

import json
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..channel import LinkBudget, cascade, complex_gaussian, draw_channels
from ..codebook import BaseKind, TrainingCodebook
from ..codebook.topology import GroupTopology
from ..linalg import CMatrix
from .ls import lower_bound, received_pilots, recover, theoretical_mse, training_pinv
from .seeding import SeedLike, as_seed_sequence, child_generator

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 1000
BATCH_TRIALS = 250


@dataclass(frozen=True)
class MseRecord:
    """One (power, architecture, strategy) result row."""
    tx_power_dbm: float
    architecture: Tuple[int, int]  # (G, M_bar)
    strategy: BaseKind
    empirical_mse: float
    theoretical_mse: float
    lower_bound: float
    n_trials: int

    def __post_init__(self):
        # relative tolerance only
        if self.lower_bound > self.theoretical_mse * (1 + 1e-9):
            raise ValueError(
                f"Lower bound {self.lower_bound:.6g} exceeds theoretical MSE "
                f"{self.theoretical_mse:.6g}"
            )
        if min(self.empirical_mse, self.theoretical_mse, self.lower_bound) < 0:
            raise ValueError("MSE values must be non-negative")

    @property
    def excess_ratio(self) -> float:
        """Empirical MSE relative to the lower bound (1.0 means optimal)."""
        if self.lower_bound == 0:
            return 1.0 if self.empirical_mse == 0 else float('inf')
        return self.empirical_mse / self.lower_bound

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        data['strategy'] = self.strategy.value
        data['architecture'] = list(self.architecture)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _trial_errors(
    top: GroupTopology,
    lb: LinkBudget,
    cb: TrainingCodebook,
    pinv: CMatrix,
    base: np.random.SeedSequence,
    first: int,
    count: int,
    zero_channel: bool
) -> np.ndarray:
    """Squared Frobenius errors of trials first .. first+count-1."""
    n, k, t_slots = top.n_bs, top.t_min, cb.t_slots
    q_stack = np.zeros((count * n, k), dtype=np.complex128)
    noise = np.empty((count * n, t_slots), dtype=np.complex128)
    for i in range(count):
        rng = child_generator(base, first + i)
        rows = slice(i * n, (i + 1) * n)
        if not zero_channel:
            q_stack[rows] = cascade(top, draw_channels(top, lb, rng)).q
        noise[rows] = complex_gaussian(rng, (n, t_slots), lb.noise_power_w)

    y = received_pilots(q_stack, cb.phi_hat, lb.tx_power_w, noise)
    error = recover(y, pinv, lb.tx_power_w) - q_stack
    per_entry = np.abs(error) ** 2
    return per_entry.reshape(count, n * k).sum(axis=1)


def empirical_mse(
    top: GroupTopology,
    lb: LinkBudget,
    cb: TrainingCodebook,
    n_trials: int = DEFAULT_TRIALS,
    rng: SeedLike = 0,
    zero_channel: bool = False,
    pinv: Optional[CMatrix] = None
) -> MseRecord:
    """
    Average ||Q_hat - Q||_F^2 over independent channel and noise draws.

    Args:
        top: System topology (must match the codebook's grouping)
        lb: Link budget, including the transmit power of this point
        cb: Training codebook
        n_trials: Number of Monte Carlo trials
        rng: Base seed; trial i uses the child generator with index i
        zero_channel: Fix Q = 0 instead of drawing channels
        pinv: Precomputed pseudo-inverse of the codebook, reused across calls

    Returns:
        MseRecord with empirical, closed-form and lower-bound MSE
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if (top.g, top.m_bar) != (cb.topology.g, cb.topology.m_bar):
        raise ValueError(
            f"Topology {top.label} does not match codebook {cb.topology.label}"
        )
    base = as_seed_sequence(rng)
    pinv = training_pinv(cb) if pinv is None else pinv

    # Fixed-order summation keeps the result bit-stable
    errors = np.concatenate([
        _trial_errors(top, lb, cb, pinv, base, first,
                      min(BATCH_TRIALS, n_trials - first), zero_channel)
        for first in range(0, n_trials, BATCH_TRIALS)
    ])
    mean_error = float(np.sum(errors) / n_trials)

    record = MseRecord(
        tx_power_dbm=lb.tx_power_dbm,
        architecture=(top.g, top.m_bar),
        strategy=cb.kind,
        empirical_mse=mean_error,
        theoretical_mse=theoretical_mse(cb, lb, top.n_bs),
        lower_bound=lower_bound(top, lb),
        n_trials=n_trials,
    )
    logger.debug(
        f"{cb.identifier} @ {lb.tx_power_dbm:g} dBm: empirical {record.empirical_mse:.4e}, "
        f"theory {record.theoretical_mse:.4e}, bound {record.lower_bound:.4e}"
    )
    return record
