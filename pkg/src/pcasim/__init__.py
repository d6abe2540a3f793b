"""Emulation of MF-TDMA channel access as a queueing delay.

Dedicated and random access methods on a shared frame are reduced to
per-packet delay and loss at the access point, driven by a small
discrete-event simulator with Reno-like window sources.
"""

from .config import ConfigError, parse_config, serialize_config
from .engine import EventTrace, FlowSpec, RunConfig, run, seed_rng
from .frame import (
    Access,
    FrameConfig,
    SlotBudget,
    fair_share,
    per_flow_frame_bit_cap,
    per_user_slot_limit,
    total_slots_per_frame,
)
from .pca import FlowRecord, PacketRecord, PcaQueue, QueueSettings, access_method_for
from .ra_loss import (
    RaPerformanceTable,
    draw_loss,
    load_ra_table,
    loss_probability,
    parse_ra_table,
    serialize_ra_table,
)

__version__ = "0.1.0"
