"""
Training Codebook Construction
==============================
Builds the GM_bar^2 x T training matrix Phi_hat whose column t stacks
vec(Phi_{t,1}), ..., vec(Phi_{t,G}) for slot t.

MSE-optimal construction (T = G * M_bar^2):
    Phi_hat = X (x) Phi_bar
- X:       G x G, X X^H = G I, unit-modulus entries (DFT or Hadamard)
- Phi_bar: M_bar^2 x M_bar^2 with column (m, n) equal to
           circshift(vec(Z1), n * M_bar) . ([Z2]_{:, m} (x) 1_M_bar)
           where Z1^H Z1 = a1 I, Z2^H Z2 = a2 I, |[Z2]_ij| = sqrt(a2 / M_bar),
           a1 * a2 = M_bar

The resulting codebook satisfies Phi_hat Phi_hat^H = M I, which attains
tr((Phi_hat Phi_hat^H)^-1) = M_bar, the minimum over all codebooks whose
per-slot blocks are unitary.

Baseline: every block drawn independently Haar-uniform on U(M_bar).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from ..linalg import (
    CMatrix,
    DEFAULT_TOL,
    DimensionMismatchError,
    circshift,
    dft_matrix,
    hadamard_product,
    hadamard_matrix,
    kron,
    max_unitarity_violation,
    unvec,
    vec,
)
from .topology import BaseKind, GroupTopology

logger = logging.getLogger(__name__)

# Gram matrices with a larger 1-norm condition number are treated as singular
MAX_CONDITION = 1e12


class BaseConditionError(ValueError):
    """Raised when a base matrix violates a construction precondition."""


class RankDeficiencyError(ValueError):
    """Raised when Phi_hat Phi_hat^H is singular or too badly conditioned."""


@dataclass(frozen=True, eq=False)
class TrainingCodebook:
    """Training matrix Phi_hat plus construction metadata."""
    topology: GroupTopology
    t_slots: int
    phi_hat: CMatrix  # G*M_bar^2 x T
    kind: BaseKind
    alpha1: Optional[float] = None  # scaling of Z1 (structured kinds only)
    alpha2: Optional[float] = None  # scaling of Z2 (structured kinds only)
    group_base: Optional[CMatrix] = None  # X
    phibar: Optional[CMatrix] = None  # Phi_bar
    seed: Optional[int] = None  # entropy of the random draw, if any

    def __post_init__(self):
        rows = self.topology.t_min
        if self.phi_hat.shape != (rows, self.t_slots):
            raise DimensionMismatchError(
                f"Phi_hat must be {rows}x{self.t_slots}, got {self.phi_hat.shape}"
            )
        if self.t_slots < rows:
            raise ValueError(
                f"Training length {self.t_slots} is below the recovery minimum {rows}"
            )
        self.phi_hat.setflags(write=False)

    @property
    def identifier(self) -> str:
        """Stable name used to tie observations to the codebook that produced them."""
        ident = f"{self.kind.value}-G{self.topology.g}-M{self.topology.m_bar}-T{self.t_slots}"
        if self.seed is not None:
            ident += f"-s{self.seed}"
        return ident


def build_group_base(g: int, kind: BaseKind) -> CMatrix:
    """
    Build the G x G outer base X with X X^H = G I and |X_ij| = 1.

    Args:
        g: Group count G
        kind: DFT or HADAMARD

    Returns:
        X as a complex matrix

    Raises:
        UnsupportedOrderError: Hadamard requested for a non power-of-two G
        ValueError: RANDOM_UNITARY requested (the baseline is built per block)
    """
    if kind is BaseKind.DFT:
        return dft_matrix(g)
    if kind is BaseKind.HADAMARD:
        return hadamard_matrix(g)
    raise ValueError("Random-unitary codebooks have no group base; use random_codebook")


def _scaled_unitary_factor(z: CMatrix, name: str, tol: float) -> float:
    """Return alpha with z^H z = alpha I, or raise BaseConditionError."""
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise BaseConditionError(f"{name} must be square, got shape {z.shape}")
    alpha = float(np.real(np.trace(z.conj().T @ z))) / z.shape[0]
    if alpha <= 0:
        raise BaseConditionError(f"{name} is zero")
    violation = max_unitarity_violation(z, alpha)
    if violation > tol * max(1.0, alpha):
        raise BaseConditionError(
            f"{name} is not scaled-unitary: max |{name}^H {name} - {alpha:.6g} I| = {violation:.3e}"
        )
    return alpha


def build_phibar(
    m_bar: int,
    z1: CMatrix,
    z2: CMatrix,
    tol: float = DEFAULT_TOL
) -> CMatrix:
    """
    Build the M_bar^2 x M_bar^2 inner base Phi_bar from two scaled-unitary bases.

    Column m * M_bar + n (0-based m, n) is
    circshift(vec(z1), n * M_bar) elementwise-times kron(z2[:, m], ones(M_bar)).

    Args:
        m_bar: Group size M_bar
        z1: Scaled unitary, z1^H z1 = alpha1 I
        z2: Scaled unitary with constant entry modulus sqrt(alpha2 / M_bar)
        tol: Tolerance used when checking the base conditions

    Returns:
        Phi_bar satisfying Phi_bar Phi_bar^H = M_bar I and per-column unitarity

    Raises:
        BaseConditionError: naming the first violated base condition
    """
    z1 = np.asarray(z1, dtype=np.complex128)
    z2 = np.asarray(z2, dtype=np.complex128)
    if z1.shape != (m_bar, m_bar) or z2.shape != (m_bar, m_bar):
        raise BaseConditionError(
            f"Z1 and Z2 must be {m_bar}x{m_bar}, got {z1.shape} and {z2.shape}"
        )

    alpha1 = _scaled_unitary_factor(z1, 'Z1', tol)
    alpha2 = _scaled_unitary_factor(z2, 'Z2', tol)

    modulus_gap = float(np.max(np.abs(np.abs(z2) - np.sqrt(alpha2 / m_bar))))
    if modulus_gap > tol:
        raise BaseConditionError(
            f"Z2 entries must share modulus sqrt(alpha2/M_bar); max deviation {modulus_gap:.3e}"
        )
    if abs(alpha1 * alpha2 - m_bar) > tol * m_bar:
        raise BaseConditionError(
            f"Scaling product alpha1*alpha2 = {alpha1 * alpha2:.6g} must equal M_bar = {m_bar}"
        )

    vec_z1 = vec(z1)
    ones = np.ones((m_bar, 1), dtype=np.complex128)
    phibar = np.empty((m_bar ** 2, m_bar ** 2), dtype=np.complex128)
    for m in range(m_bar):
        modulation = kron(z2[:, [m]], ones)
        for n in range(m_bar):
            column = hadamard_product(circshift(vec_z1, n * m_bar), modulation)
            phibar[:, m * m_bar + n] = column[:, 0]
    return phibar


def _base(kind: BaseKind, order: int) -> CMatrix:
    return dft_matrix(order) if kind is BaseKind.DFT else hadamard_matrix(order)


def build_codebook(
    top: GroupTopology,
    kind: BaseKind,
    alpha1: Optional[float] = None
) -> TrainingCodebook:
    """
    Build the MSE-optimal codebook Phi_hat = X (x) Phi_bar with T = G * M_bar^2.

    Args:
        top: System topology
        kind: DFT or HADAMARD (used for both X and the inner bases Z1, Z2)
        alpha1: Scaling of Z1; defaults to M_bar, giving Z1 = B and Z2 = B / sqrt(M_bar)

    Returns:
        Immutable TrainingCodebook

    Raises:
        UnsupportedOrderError: Hadamard with G or M_bar not a power of two
        ValueError: kind is RANDOM_UNITARY or alpha1 is not positive
    """
    if not kind.is_structured:
        raise ValueError("build_codebook supports DFT and HADAMARD; use random_codebook")
    m_bar = top.m_bar
    alpha1 = float(m_bar) if alpha1 is None else float(alpha1)
    if alpha1 <= 0:
        raise ValueError(f"alpha1 must be positive, got {alpha1}")
    alpha2 = m_bar / alpha1

    x = build_group_base(top.g, kind)
    base = _base(kind, m_bar)
    z1 = base * np.sqrt(alpha1 / m_bar)
    z2 = base * np.sqrt(alpha2 / m_bar)
    phibar = build_phibar(m_bar, z1, z2)
    phi_hat = kron(x, phibar)

    logger.debug(
        f"Built {kind.value} codebook G={top.g} M_bar={m_bar}: "
        f"{phi_hat.shape[0]}x{phi_hat.shape[1]}, alpha1={alpha1:g}, alpha2={alpha2:g}"
    )
    x.setflags(write=False)
    phibar.setflags(write=False)
    return TrainingCodebook(
        topology=top,
        t_slots=top.t_min,
        phi_hat=phi_hat,
        kind=kind,
        alpha1=alpha1,
        alpha2=alpha2,
        group_base=x,
        phibar=phibar,
    )


def haar_unitary(n: int, rng: np.random.Generator) -> CMatrix:
    """
    Draw an n x n unitary matrix from the Haar measure on U(n).

    QR of a complex Ginibre matrix, with Q's columns multiplied by the phases
    of R's diagonal so that the result is not biased by the QR sign convention.
    """
    while True:
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        q, r = scipy.linalg.qr(z)
        d = np.diag(r)
        if np.min(np.abs(d)) > 1e-12:
            break
        # Singular draw, probability zero in exact arithmetic
        logger.debug("Discarding rank-deficient Ginibre draw")
    return q * (d / np.abs(d))


def random_codebook(top: GroupTopology, rng: np.random.Generator) -> TrainingCodebook:
    """
    Draw the random-unitary baseline codebook with T = G * M_bar^2 slots.

    Each per-slot block Phi_{t,g} is independent and Haar-uniform on U(M_bar).
    Per-block unitarity holds by construction; Phi_hat Phi_hat^H = M I does not.
    """
    seed = int(rng.integers(0, 2 ** 31 - 1))
    draw = np.random.default_rng(seed)
    m_bar = top.m_bar
    t_slots = top.t_min
    phi_hat = np.empty((t_slots, t_slots), dtype=np.complex128)
    for t in range(t_slots):
        for g in range(top.g):
            block = haar_unitary(m_bar, draw)
            phi_hat[g * m_bar ** 2:(g + 1) * m_bar ** 2, t] = vec(block)[:, 0]
    return TrainingCodebook(
        topology=top,
        t_slots=t_slots,
        phi_hat=phi_hat,
        kind=BaseKind.RANDOM_UNITARY,
        seed=seed,
    )


def slot_matrices(cb: TrainingCodebook, t: int) -> List[CMatrix]:
    """
    Recover the G scattering blocks Phi_{t,g} configured in slot ``t`` (0-based).

    Raises:
        IndexError: t outside [0, T)
    """
    if not 0 <= t < cb.t_slots:
        raise IndexError(f"Slot index {t} out of range for T={cb.t_slots}")
    m_bar = cb.topology.m_bar
    seg = m_bar ** 2
    column = cb.phi_hat[:, t]
    return [
        unvec(column[g * seg:(g + 1) * seg], m_bar, m_bar).copy()
        for g in range(cb.topology.g)
    ]


def restack_slot(blocks: List[CMatrix]) -> CMatrix:
    """Inverse of slot_matrices: stack vec of each block into one column."""
    return np.vstack([vec(b) for b in blocks])


def slot_configuration(cb: TrainingCodebook, t: int) -> CMatrix:
    """Physical M x M block-diagonal scattering matrix for slot ``t``."""
    return scipy.linalg.block_diag(*slot_matrices(cb, t))


def _gram_inverse(phi_hat: CMatrix) -> Tuple[CMatrix, CMatrix]:
    """
    Return (Phi Phi^H, (Phi Phi^H)^-1) via a Cholesky solve.

    Raises:
        RankDeficiencyError: if the Gram matrix is not positive definite or its
            1-norm condition number exceeds MAX_CONDITION
    """
    gram = phi_hat @ phi_hat.conj().T
    try:
        factor = scipy.linalg.cho_factor(gram, lower=False, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise RankDeficiencyError(f"Phi_hat does not have full row rank: {exc}") from exc
    inverse = scipy.linalg.cho_solve(factor, np.eye(gram.shape[0]), check_finite=False)
    condition = np.linalg.norm(gram, 1) * np.linalg.norm(inverse, 1)
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise RankDeficiencyError(
            f"Phi_hat Phi_hat^H is ill-conditioned (cond_1 = {condition:.3e})"
        )
    return gram, inverse


def codebook_mse_factor(cb: TrainingCodebook) -> float:
    """
    MSE factor tr((Phi_hat Phi_hat^H)^-1); equals M_bar for optimal codebooks.

    Raises:
        RankDeficiencyError: if Phi_hat is (numerically) rank deficient
    """
    _, inverse = _gram_inverse(cb.phi_hat)
    return float(np.real(np.trace(inverse)))


@dataclass(frozen=True)
class MseBoundChain:
    """Terms of tr(W^-1) >= sum 1/W_ii >= K^2 / tr(W), W = Phi_hat Phi_hat^H."""
    trace_inverse: float
    diagonal_bound: float
    am_hm_bound: float
    notes: List[str] = field(default_factory=list)


def mse_bound_chain(cb: TrainingCodebook) -> MseBoundChain:
    """
    Evaluate each term of the MSE lower-bound chain for a codebook.

    With unitary blocks every column of Phi_hat has squared norm M, so the
    last term equals M_bar for any feasible codebook.
    """
    gram, inverse = _gram_inverse(cb.phi_hat)
    diag = np.real(np.diag(gram))
    k = gram.shape[0]
    notes = []
    if cb.kind.is_structured:
        notes.append("structured codebook: all three terms should coincide")
    return MseBoundChain(
        trace_inverse=float(np.real(np.trace(inverse))),
        diagonal_bound=float(np.sum(1.0 / diag)),
        am_hm_bound=float(k ** 2 / np.sum(diag)),
        notes=notes,
    )
