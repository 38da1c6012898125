"""
Estimator Module
================
Uplink training simulation, LS estimation of the cascaded channel and
Monte Carlo evaluation of the estimation MSE.
"""

from .ls import (
    TrainingObservation,
    lower_bound,
    ls_estimate,
    received_pilots,
    recover,
    simulate_training,
    theoretical_mse,
    training_pinv,
)
from .mse import DEFAULT_TRIALS, MseRecord, empirical_mse
from .seeding import as_seed_sequence, child_generator, child_sequence

__all__ = [
    'TrainingObservation',
    'lower_bound',
    'ls_estimate',
    'received_pilots',
    'recover',
    'simulate_training',
    'theoretical_mse',
    'training_pinv',
    'DEFAULT_TRIALS',
    'MseRecord',
    'empirical_mse',
    'as_seed_sequence',
    'child_generator',
    'child_sequence',
]
