"""
Codebook Validator
==================
Constraint validation for training codebooks.

Each check reports the max-abs violation of one design constraint:
- slot_unitarity:  Phi_{t,g}^H Phi_{t,g} = I for every slot and group
- full_rank:       Phi_hat has full row rank G * M_bar^2
- gram_rows:       Phi_hat Phi_hat^H = M I
- gram_columns:    Phi_hat^H Phi_hat = M I
- mse_factor:      tr((Phi_hat Phi_hat^H)^-1) = M_bar
- group_base_*:    X X^H = G I and |X_ij| = 1 (when X is known)
- phibar_*:        Phi_bar Phi_bar^H = M_bar I and per-column unitarity (when known)

Gram and MSE checks are informational for the random-unitary baseline,
which is only required to satisfy per-slot unitarity.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List

import numpy as np

from ..linalg import DEFAULT_TOL, max_unitarity_violation, unvec
from .builder import RankDeficiencyError, TrainingCodebook, codebook_mse_factor, slot_matrices

logger = logging.getLogger(__name__)


class ValidationStatus(Enum):
    """Overall status of a codebook validation."""
    PASSED = "passed"
    FAILED = "failed"


@dataclass
class ConstraintCheck:
    """Outcome of one constraint check."""
    name: str
    violation: float  # max-abs residual; inf when the check could not be evaluated
    enforced: bool  # False for informational checks
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violation <= self.tolerance


@dataclass
class ValidationResult:
    """Result of validating one codebook."""
    status: ValidationStatus
    codebook: str
    checks: List[ConstraintCheck] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def failed_checks(self) -> List[ConstraintCheck]:
        return [c for c in self.checks if c.enforced and not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {
            'status': self.status.value,
            'codebook': self.codebook,
            'checks': [
                {**asdict(c), 'passed': c.passed} for c in self.checks
            ],
            'notes': self.notes,
        }

    def to_json(self) -> str:
        """Convert to JSON string."""
        return json.dumps(self.to_dict(), indent=2)

    def format_report(self) -> str:
        """Human-readable report, one line per constraint."""
        lines = [f"Codebook {self.codebook}: {self.status.value.upper()}"]
        for check in self.checks:
            mark = 'ok' if check.passed else ('FAIL' if check.enforced else 'info')
            lines.append(
                f"  {check.name:<22} max violation {check.violation:.3e}"
                f"  (tol {check.tolerance:.0e})  {mark}"
            )
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


class CodebookValidator:
    """
    Runs the design-constraint checks on a training codebook.
    """

    def __init__(self, tol: float = DEFAULT_TOL, mse_tol: float = 1e-9):
        """
        Initialize the validator.

        Args:
            tol: Absolute tolerance on max-abs matrix residuals
            mse_tol: Absolute tolerance on the MSE-factor gap
        """
        self.tol = tol
        self.mse_tol = mse_tol

    def validate(self, cb: TrainingCodebook) -> ValidationResult:
        """
        Validate a codebook against every applicable constraint.

        Args:
            cb: Codebook to validate

        Returns:
            ValidationResult with per-constraint violations
        """
        top = cb.topology
        structured = cb.kind.is_structured
        checks = [
            ConstraintCheck('slot_unitarity', self._slot_violation(cb), True, self.tol),
        ]
        notes: List[str] = []

        gram_scale = float(top.m)
        rows = cb.phi_hat @ cb.phi_hat.conj().T
        cols = cb.phi_hat.conj().T @ cb.phi_hat
        checks.append(ConstraintCheck(
            'gram_rows', _max_abs(rows - gram_scale * np.eye(rows.shape[0])),
            structured, self.tol,
        ))
        checks.append(ConstraintCheck(
            'gram_columns', _max_abs(cols - gram_scale * np.eye(cols.shape[0])),
            structured, self.tol,
        ))

        try:
            factor = codebook_mse_factor(cb)
            checks.append(ConstraintCheck('full_rank', 0.0, True, self.tol))
            checks.append(ConstraintCheck(
                'mse_factor', abs(factor - top.m_bar), structured, self.mse_tol,
            ))
            if not structured:
                notes.append(
                    f"MSE factor {factor:.6g} exceeds the lower bound M_bar={top.m_bar} "
                    f"by {factor - top.m_bar:.3e}"
                )
        except RankDeficiencyError as exc:
            checks.append(ConstraintCheck('full_rank', float('inf'), True, self.tol))
            notes.append(str(exc))

        if cb.group_base is not None:
            x = cb.group_base
            checks.append(ConstraintCheck(
                'group_base_gram', _max_abs(x @ x.conj().T - top.g * np.eye(top.g)),
                True, self.tol,
            ))
            checks.append(ConstraintCheck(
                'group_base_modulus', _max_abs(np.abs(x) - 1.0), True, self.tol,
            ))
        if cb.phibar is not None:
            checks.extend(self._phibar_checks(cb.phibar, top.m_bar))

        if top.m_bar == 1:
            notes.append(
                "M_bar = 1: single-connected architecture, the codebook reduces to the "
                "conventional-RIS training pattern"
            )
        if not structured:
            notes.append("random-unitary baseline: Gram and MSE checks are informational")

        result = ValidationResult(
            status=ValidationStatus.PASSED,
            codebook=cb.identifier,
            checks=checks,
            notes=notes,
        )
        if result.failed_checks:
            result.status = ValidationStatus.FAILED
            names = ', '.join(c.name for c in result.failed_checks)
            logger.warning(f"Codebook {cb.identifier} failed checks: {names}")
        return result

    def validate_batch(self, codebooks: List[TrainingCodebook]) -> List[ValidationResult]:
        """Validate multiple codebooks."""
        return [self.validate(cb) for cb in codebooks]

    @staticmethod
    def _slot_violation(cb: TrainingCodebook) -> float:
        worst = 0.0
        for t in range(cb.t_slots):
            for block in slot_matrices(cb, t):
                worst = max(worst, max_unitarity_violation(block))
        return worst

    def _phibar_checks(self, phibar: np.ndarray, m_bar: int) -> List[ConstraintCheck]:
        size = m_bar ** 2
        gram = _max_abs(phibar @ phibar.conj().T - m_bar * np.eye(size))
        column_worst = max(
            max_unitarity_violation(unvec(phibar[:, k], m_bar, m_bar)) for k in range(size)
        )
        return [
            ConstraintCheck('phibar_gram', gram, True, self.tol),
            ConstraintCheck('phibar_column_unitarity', column_worst, True, self.tol),
        ]


def _max_abs(residual: np.ndarray) -> float:
    return float(np.max(np.abs(residual)))
