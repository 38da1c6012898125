"""
Group Topology
==============
Dimensions of the BD-RIS aided MISO system: BS antenna count N, BD-RIS port
count M and the uniform grouping M = G * M_bar of the group-connected
impedance network.

M_bar = 1 is the single-connected (conventional RIS) case, G = 1 the
fully-connected one.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple


class BaseKind(Enum):
    """Orthogonal base used to build a training codebook."""
    DFT = "dft"
    HADAMARD = "hadamard"
    RANDOM_UNITARY = "random_unitary"

    @classmethod
    def parse(cls, text: str) -> 'BaseKind':
        """Parse a user-facing name (``dft``, ``hadamard``, ``random``)."""
        key = text.strip().lower()
        aliases = {
            'dft': cls.DFT,
            'fourier': cls.DFT,
            'hadamard': cls.HADAMARD,
            'random': cls.RANDOM_UNITARY,
            'random_unitary': cls.RANDOM_UNITARY,
        }
        if key not in aliases:
            raise ValueError(f"Unknown codebook strategy '{text}'")
        return aliases[key]

    @property
    def is_structured(self) -> bool:
        """DFT and Hadamard codebooks meet the MSE lower bound."""
        return self is not BaseKind.RANDOM_UNITARY


@dataclass(frozen=True)
class GroupTopology:
    """System and BD-RIS architecture dimensions."""
    n_bs: int  # BS antennas N
    g: int  # group count G
    m_bar: int  # group size M_bar

    def __post_init__(self):
        for name in ('n_bs', 'g', 'm_bar'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @classmethod
    def from_ports(cls, n_bs: int, m: int, g: int) -> 'GroupTopology':
        """Build from the total port count M, requiring a uniform split."""
        if g < 1 or m % g != 0:
            raise ValueError(f"{m} ports cannot be split uniformly into {g} groups")
        return cls(n_bs=n_bs, g=g, m_bar=m // g)

    @property
    def m(self) -> int:
        """Total BD-RIS port count M = G * M_bar."""
        return self.g * self.m_bar

    @property
    def t_min(self) -> int:
        """Minimum training length G * M_bar^2 (number of unknowns per BS antenna)."""
        return self.g * self.m_bar ** 2

    @property
    def label(self) -> str:
        return f"{self.g}x{self.m_bar}"

    def group_slice(self, g: int) -> slice:
        """Port indices belonging to group ``g`` (0-based)."""
        if not 0 <= g < self.g:
            raise IndexError(f"Group index {g} out of range for G={self.g}")
        return slice(g * self.m_bar, (g + 1) * self.m_bar)


def uniform_groupings(m: int) -> List[Tuple[int, int]]:
    """All (G, M_bar) pairs with G * M_bar = m, ordered by increasing M_bar."""
    pairs = [(m // m_bar, m_bar) for m_bar in range(1, m + 1) if m % m_bar == 0]
    return pairs
