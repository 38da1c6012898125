"""
Channel Module
==============
Rayleigh fading with distance-based pathloss, the cascaded channel of the
group-connected BD-RIS, and the TDD reciprocity identity.
"""

from .link_budget import (
    Link,
    LinkBudget,
    db_to_linear,
    dbm_to_w,
    linear_to_db,
    pathloss,
    w_to_dbm,
)
from .model import (
    CascadedChannel,
    ChannelRealization,
    cascade,
    complex_gaussian,
    direct_downlink,
    direct_uplink,
    downlink_channel,
    draw_channels,
    dump_channels,
    effective_uplink,
    reciprocity_check,
)

__all__ = [
    'Link',
    'LinkBudget',
    'db_to_linear',
    'dbm_to_w',
    'linear_to_db',
    'pathloss',
    'w_to_dbm',
    'CascadedChannel',
    'ChannelRealization',
    'cascade',
    'complex_gaussian',
    'direct_downlink',
    'direct_uplink',
    'downlink_channel',
    'draw_channels',
    'dump_channels',
    'effective_uplink',
    'reciprocity_check',
]
