"""
Training Codebook Module
========================
Construction, validation and export of BD-RIS training codebooks:
- MSE-optimal Kronecker construction from DFT / Hadamard bases
- Haar random-unitary baseline
- Per-slot decoding into physical scattering blocks
- Constraint validation and file export
"""

from .topology import BaseKind, GroupTopology, uniform_groupings
from .builder import (
    BaseConditionError,
    MseBoundChain,
    RankDeficiencyError,
    TrainingCodebook,
    build_codebook,
    build_group_base,
    build_phibar,
    codebook_mse_factor,
    haar_unitary,
    mse_bound_chain,
    random_codebook,
    restack_slot,
    slot_configuration,
    slot_matrices,
)
from .validator import CodebookValidator, ConstraintCheck, ValidationResult, ValidationStatus
from .export import (
    BINARY_TOL,
    CodebookFormatError,
    read_binary,
    read_codebook,
    read_csv,
    write_binary,
    write_codebook,
    write_csv,
)

__all__ = [
    'BaseKind',
    'GroupTopology',
    'uniform_groupings',
    'BaseConditionError',
    'MseBoundChain',
    'RankDeficiencyError',
    'TrainingCodebook',
    'build_codebook',
    'build_group_base',
    'build_phibar',
    'codebook_mse_factor',
    'haar_unitary',
    'mse_bound_chain',
    'random_codebook',
    'restack_slot',
    'slot_configuration',
    'slot_matrices',
    'CodebookValidator',
    'ConstraintCheck',
    'ValidationResult',
    'ValidationStatus',
    'BINARY_TOL',
    'CodebookFormatError',
    'read_binary',
    'read_codebook',
    'read_csv',
    'write_binary',
    'write_codebook',
    'write_csv',
]
