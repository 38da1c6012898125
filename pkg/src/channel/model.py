"""
Channel Model
=============
i.i.d. Rayleigh fading channels with distance-based pathloss, the cascaded
channel Q = [Q_1, ..., Q_G] with Q_g = h_g^T (x) G_g, and the uplink and
downlink (TDD reciprocity) forms of the user-RIS-BS channel.

Entries are circularly-symmetric complex Gaussian: real and imaginary parts
each have variance zeta / 2 so that E|entry|^2 = zeta.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Union

import numpy as np
import pandas as pd
import scipy.linalg

from ..codebook.topology import GroupTopology
from ..linalg import CMatrix, DimensionMismatchError, kron, vec
from .link_budget import Link, LinkBudget, pathloss

logger = logging.getLogger(__name__)


def complex_gaussian(rng: np.random.Generator, shape, variance: float) -> CMatrix:
    """Draw CN(0, variance) entries."""
    parts = rng.standard_normal((2,) + tuple(shape))
    return np.sqrt(variance / 2.0) * (parts[0] + 1j * parts[1])


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of the RIS-BS channel G (N x M) and user-RIS channel h (M x 1)."""
    g_mat: CMatrix
    h_vec: CMatrix

    def __post_init__(self):
        if self.h_vec.ndim != 2 or self.h_vec.shape[1] != 1:
            raise DimensionMismatchError(f"h must be a column vector, got {self.h_vec.shape}")
        if self.g_mat.shape[1] != self.h_vec.shape[0]:
            raise DimensionMismatchError(
                f"G is {self.g_mat.shape} but h has {self.h_vec.shape[0]} entries"
            )


@dataclass(frozen=True, eq=False)
class CascadedChannel:
    """Cascaded channel Q = [Q_1, ..., Q_G], N x G*M_bar^2."""
    q: CMatrix
    topology: GroupTopology

    def __post_init__(self):
        expected = (self.topology.n_bs, self.topology.t_min)
        if self.q.shape != expected:
            raise DimensionMismatchError(f"Q must be {expected}, got {self.q.shape}")

    def block(self, g: int) -> CMatrix:
        """Q_g, the N x M_bar^2 block of group ``g`` (0-based)."""
        seg = self.topology.m_bar ** 2
        if not 0 <= g < self.topology.g:
            raise IndexError(f"Group index {g} out of range for G={self.topology.g}")
        return self.q[:, g * seg:(g + 1) * seg]


def draw_channels(
    top: GroupTopology,
    lb: LinkBudget,
    rng: np.random.Generator
) -> ChannelRealization:
    """
    Draw one Rayleigh realization of (G, h).

    G is drawn before h so that a given generator state fixes both.
    """
    g_mat = complex_gaussian(rng, (top.n_bs, top.m), pathloss(lb, Link.BS_RIS))
    h_vec = complex_gaussian(rng, (top.m, 1), pathloss(lb, Link.RIS_USER))
    return ChannelRealization(g_mat=g_mat, h_vec=h_vec)


def _check_topology(top: GroupTopology, ch: ChannelRealization) -> None:
    if ch.g_mat.shape != (top.n_bs, top.m):
        raise DimensionMismatchError(
            f"G is {ch.g_mat.shape}, topology expects {(top.n_bs, top.m)}"
        )


def cascade(top: GroupTopology, ch: ChannelRealization) -> CascadedChannel:
    """
    Assemble the cascaded channel; block g is kron(h_g^T, G_g).

    G_g are the columns and h_g the entries of the g-th port group.
    """
    _check_topology(top, ch)
    blocks = []
    for g in range(top.g):
        ports = top.group_slice(g)
        blocks.append(kron(ch.h_vec[ports].T, ch.g_mat[:, ports]))
    return CascadedChannel(q=np.hstack(blocks), topology=top)


def _check_blocks(top: GroupTopology, blocks: Sequence[CMatrix]) -> None:
    if len(blocks) != top.g:
        raise DimensionMismatchError(f"Expected {top.g} scattering blocks, got {len(blocks)}")
    for k, block in enumerate(blocks):
        if np.shape(block) != (top.m_bar, top.m_bar):
            raise DimensionMismatchError(
                f"Block {k} is {np.shape(block)}, expected {top.m_bar}x{top.m_bar}"
            )


def effective_uplink(q: CascadedChannel, phi_blocks: Sequence[CMatrix]) -> CMatrix:
    """User-RIS-BS channel h_u = sum_g Q_g vec(Phi_g), N x 1."""
    _check_blocks(q.topology, phi_blocks)
    stacked = np.vstack([vec(b) for b in phi_blocks])
    return q.q @ stacked


def direct_uplink(ch: ChannelRealization, phi_blocks: Sequence[CMatrix]) -> CMatrix:
    """User-RIS-BS channel from the separate channels, G blkdiag(Phi) h."""
    phi = scipy.linalg.block_diag(*phi_blocks)
    return ch.g_mat @ phi @ ch.h_vec


def downlink_channel(q: CascadedChannel, phi_blocks: Sequence[CMatrix]) -> CMatrix:
    """Downlink channel from the uplink cascaded channel, sum_g vec^T(Phi_g^T) Q_g^T (1 x N)."""
    _check_blocks(q.topology, phi_blocks)
    stacked = np.vstack([vec(np.transpose(b)) for b in phi_blocks])
    return stacked.T @ q.q.T


def direct_downlink(ch: ChannelRealization, phi_blocks: Sequence[CMatrix]) -> CMatrix:
    """Downlink channel h' Phi' G' with reciprocal channels h' = h^T, G' = G^T (1 x N)."""
    phi = scipy.linalg.block_diag(*phi_blocks)
    return ch.h_vec.T @ phi @ ch.g_mat.T


def reciprocity_check(
    q: CascadedChannel,
    ch: ChannelRealization,
    phi_blocks: Sequence[CMatrix]
) -> float:
    """Max-abs difference between the direct and cascaded forms of the downlink channel."""
    diff = direct_downlink(ch, phi_blocks) - downlink_channel(q, phi_blocks)
    return float(np.max(np.abs(diff))) if diff.size else 0.0


def dump_channels(ch: ChannelRealization, path: Union[str, Path]) -> Path:
    """
    Write a realization for debugging.

    First row ``N,M``; then the N rows of G and a final row holding h, each
    with real and imaginary parts interleaved.
    """
    path = Path(path)
    n, m = ch.g_mat.shape
    rows: List[np.ndarray] = list(ch.g_mat) + [ch.h_vec[:, 0]]
    data = np.empty((len(rows), 2 * m))
    for k, row in enumerate(rows):
        data[k, 0::2] = row.real
        data[k, 1::2] = row.imag
    with open(path, 'w', newline='') as f:
        f.write(f"{n},{m}\n")
        pd.DataFrame(data).to_csv(
            f, index=False, header=False, float_format='%.17g', lineterminator='\n'
        )
    logger.debug(f"Wrote channel realization ({n}x{m}) to {path}")
    return path
