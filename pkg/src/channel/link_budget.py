"""
Link Budget
===========
Distance-based large-scale fading and power unit conversions.

Pathloss per link: zeta = zeta0 * (d / d0) ** (-epsilon)
"""

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum


def db_to_linear(db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * _log10(value)


def dbm_to_w(dbm: float) -> float:
    """Convert dBm to watts; -inf dBm maps to 0 W."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def w_to_dbm(watts: float) -> float:
    return 10.0 * _log10(watts) + 30.0


def _log10(value: float) -> float:
    return math.log10(value) if value > 0 else float('-inf')


class Link(Enum):
    """Links of the user-RIS-BS path."""
    BS_RIS = "BI"
    RIS_USER = "IU"


@dataclass(frozen=True)
class LinkBudget:
    """Pathloss, noise and transmit power parameters (defaults: 32-port reference scenario)."""
    zeta0_db: float = -30.0  # attenuation at the reference distance
    d0_m: float = 1.0  # reference distance
    d_bi_m: float = 50.0  # BS-RIS distance
    d_iu_m: float = 10.0  # RIS-user distance
    epsilon: float = 2.2  # pathloss exponent
    noise_power_dbm: float = -100.0  # noise variance per complex entry
    tx_power_dbm: float = 0.0  # uplink transmit power P_u

    def __post_init__(self):
        for name in ('d0_m', 'd_bi_m', 'd_iu_m'):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def zeta0(self) -> float:
        return db_to_linear(self.zeta0_db)

    @property
    def noise_power_w(self) -> float:
        return dbm_to_w(self.noise_power_dbm)

    @property
    def tx_power_w(self) -> float:
        return dbm_to_w(self.tx_power_dbm)

    def distance(self, link: Link) -> float:
        return self.d_bi_m if link is Link.BS_RIS else self.d_iu_m

    def with_tx_power(self, tx_power_dbm: float) -> 'LinkBudget':
        """Copy of this budget at another transmit power."""
        return dataclasses.replace(self, tx_power_dbm=tx_power_dbm)


def pathloss(lb: LinkBudget, which: Link) -> float:
    """
    Linear large-scale power gain of one link.

    Args:
        lb: Link budget
        which: Link.BS_RIS or Link.RIS_USER

    Returns:
        zeta0 * (d / d0) ** (-epsilon)
    """
    return lb.zeta0 * (lb.distance(which) / lb.d0_m) ** (-lb.epsilon)
