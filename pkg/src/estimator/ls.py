"""
Least-Squares Estimation
========================
Uplink training and LS recovery of the cascaded channel.

Training model (pilots x_t = 1):
    Y = sqrt(P_u) Q Phi_hat + N,   N entries CN(0, sigma^2)
LS estimate:
    Q_hat = Y Phi_hat^H (Phi_hat Phi_hat^H)^-1 / sqrt(P_u)
MSE:
    E ||Q_hat - Q||_F^2 = (N sigma^2 / P_u) tr((Phi_hat Phi_hat^H)^-1) >= N sigma^2 M_bar / P_u

Codebooks built from DFT / Hadamard bases satisfy Phi_hat Phi_hat^H = M I, so
their pseudo-inverse is Phi_hat^H / M and no matrix inversion is needed.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..channel import CascadedChannel, LinkBudget, complex_gaussian
from ..codebook import TrainingCodebook, codebook_mse_factor
from ..codebook.builder import MAX_CONDITION, RankDeficiencyError
from ..codebook.topology import GroupTopology
from ..linalg import CMatrix, DimensionMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrainingObservation:
    """Received pilots Y (N x T) for one training period."""
    y: CMatrix
    codebook_ref: str  # identifier of the codebook used
    tx_power_w: float


def training_pinv(cb: TrainingCodebook, force_general: bool = False) -> CMatrix:
    """
    Right pseudo-inverse Phi_hat^H (Phi_hat Phi_hat^H)^-1, T x G*M_bar^2.

    Args:
        cb: Training codebook
        force_general: Use the Hermitian solve even for DFT / Hadamard codebooks

    Raises:
        RankDeficiencyError: Phi_hat is rank deficient or badly conditioned
    """
    phi = cb.phi_hat
    if cb.kind.is_structured and not force_general:
        return phi.conj().T / cb.topology.m

    gram = phi @ phi.conj().T
    try:
        factor = scipy.linalg.cho_factor(gram, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise RankDeficiencyError(f"Phi_hat does not have full row rank: {exc}") from exc
    # (Phi Phi^H)^-1 Phi, conjugate-transposed
    solved = scipy.linalg.cho_solve(factor, phi, check_finite=False)
    inverse_norm = np.linalg.norm(
        scipy.linalg.cho_solve(factor, np.eye(gram.shape[0]), check_finite=False), 1
    )
    condition = np.linalg.norm(gram, 1) * inverse_norm
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise RankDeficiencyError(
            f"Phi_hat Phi_hat^H is ill-conditioned (cond_1 = {condition:.3e})"
        )
    return solved.conj().T


def received_pilots(
    q: CMatrix,
    phi_hat: CMatrix,
    tx_power_w: float,
    noise: CMatrix
) -> CMatrix:
    """sqrt(P_u) Q Phi_hat + noise; ``q`` may stack several channels row-wise."""
    return np.sqrt(tx_power_w) * (q @ phi_hat) + noise


def simulate_training(
    q: CascadedChannel,
    cb: TrainingCodebook,
    lb: LinkBudget,
    rng: np.random.Generator
) -> TrainingObservation:
    """
    Simulate the uplink training period.

    Args:
        q: Cascaded channel
        cb: Training codebook
        lb: Link budget (transmit and noise power)
        rng: Random source for the receiver noise

    Returns:
        TrainingObservation holding Y = sqrt(P_u) Q Phi_hat + N
    """
    if q.q.shape[1] != cb.phi_hat.shape[0]:
        raise DimensionMismatchError(
            f"Q has {q.q.shape[1]} columns but Phi_hat has {cb.phi_hat.shape[0]} rows"
        )
    noise = complex_gaussian(rng, (q.q.shape[0], cb.t_slots), lb.noise_power_w)
    y = received_pilots(q.q, cb.phi_hat, lb.tx_power_w, noise)
    return TrainingObservation(y=y, codebook_ref=cb.identifier, tx_power_w=lb.tx_power_w)


def recover(y: CMatrix, pinv: CMatrix, tx_power_w: float) -> CMatrix:
    """Apply the LS pseudo-inverse; ``y`` may stack several observations row-wise."""
    if not tx_power_w > 0:
        raise ValueError(f"Transmit power must be positive, got {tx_power_w} W")
    return (y @ pinv) / np.sqrt(tx_power_w)


def ls_estimate(
    obs: TrainingObservation,
    cb: TrainingCodebook,
    force_general: bool = False
) -> CascadedChannel:
    """
    LS estimate of the cascaded channel from one training observation.

    Args:
        obs: Received pilots
        cb: The codebook that produced ``obs``
        force_general: Skip the inversion-free path for structured codebooks

    Returns:
        Estimated cascaded channel Q_hat

    Raises:
        ValueError: the observation was produced by another codebook
        RankDeficiencyError: Phi_hat is rank deficient
    """
    if obs.codebook_ref != cb.identifier:
        raise ValueError(
            f"Observation was taken with codebook {obs.codebook_ref}, not {cb.identifier}"
        )
    pinv = training_pinv(cb, force_general=force_general)
    q_hat = recover(obs.y, pinv, obs.tx_power_w)
    top = cb.topology
    return CascadedChannel(
        q=q_hat,
        topology=GroupTopology(n_bs=q_hat.shape[0], g=top.g, m_bar=top.m_bar),
    )


def theoretical_mse(cb: TrainingCodebook, lb: LinkBudget, n_bs: int) -> float:
    """Closed-form LS MSE (N sigma^2 / P_u) tr((Phi_hat Phi_hat^H)^-1)."""
    return n_bs * lb.noise_power_w / lb.tx_power_w * codebook_mse_factor(cb)


def lower_bound(top: GroupTopology, lb: LinkBudget) -> float:
    """Minimum achievable LS MSE, N sigma^2 M_bar / P_u."""
    return top.n_bs * lb.noise_power_w / lb.tx_power_w * top.m_bar
