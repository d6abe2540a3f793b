"""MF-TDMA frame geometry and slot/capacity arithmetic.

A frame is a time x frequency block emitted every ``frame_duration``
seconds. It carries ``slots_per_freq`` slots on each of ``freq_random``
random-access and ``freq_dedicated`` dedicated frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


EPS = 1e-9
TICKS_PER_SECOND = 1_000_000


def to_ticks(seconds: float) -> int:
    """Simulation time is an integer count of microseconds."""
    return round(seconds * TICKS_PER_SECOND)


class Access(str, Enum):
    DEDICATED = "dedicated"
    RANDOM = "random"


def floor_eps(x: float) -> int:
    """Floor that tolerates binary rounding (``1e6 * 0.045`` is 44999.999...)."""
    return math.floor(x + EPS * max(1.0, abs(x)))


def ceil_eps(x: float) -> int:
    return math.ceil(x - EPS * max(1.0, abs(x)))


@dataclass(frozen=True)
class FrameConfig:
    frame_duration: float
    slots_per_freq: int
    freq_random: int = 0
    freq_dedicated: int = 0
    ra_block_freqs: float = 0.0
    bits_per_slot_dedicated: int = 0
    bits_per_ra_allocation: int = 0
    blocks_per_pldu: int = 0
    antenna_limited: bool = True
    max_throughput: float = math.inf  # bits/s

    def __post_init__(self):
        if not self.frame_duration > 0:
            raise ValueError("frame_duration must be > 0")
        for name in ("slots_per_freq", "freq_random", "freq_dedicated"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.freq_random > 0:
            if self.blocks_per_pldu < 1:
                raise ValueError("blocks_per_pldu must be >= 1 when freq_random > 0")
            if not self.ra_block_freqs > 0:
                raise ValueError("ra_block_freqs must be > 0 when freq_random > 0")
        if self.max_throughput < 0:
            raise ValueError("max_throughput must be >= 0")

    @property
    def dedicated_slots(self) -> int:
        return self.slots_per_freq * self.freq_dedicated

    @property
    def random_slots(self) -> int:
        return self.slots_per_freq * self.freq_random

    @property
    def ra_block_slots(self) -> int:
        """Slots in one RA block (N_ra), rounded down to whole slots."""
        return floor_eps(self.ra_block_freqs * self.slots_per_freq)

    @property
    def n_ra_blocks(self) -> int:
        if self.freq_random == 0 or self.ra_block_slots == 0:
            return 0
        return self.random_slots // self.ra_block_slots


@dataclass(frozen=True)
class SlotBudget:
    """Capacity granted to one flow for one frame.

    For random access ``slots_granted`` counts PLDU allocations; each one
    occupies ``blocks_per_pldu`` slots of the RA block.
    """

    access_kind: Access
    slots_granted: int
    bits_granted: int


def total_slots_per_frame(cfg: FrameConfig) -> int:
    return cfg.slots_per_freq * (cfg.freq_random + cfg.freq_dedicated)


def per_user_slot_limit(cfg: FrameConfig, access: Access | str) -> int:
    """Most slots (dedicated) or PLDUs (random) one flow may occupy per frame.

    With ``antenna_limited`` a transmitter sits on one frequency at a time,
    so only ``slots_per_freq`` time slots are reachable.
    """
    access = Access(access)
    if access is Access.DEDICATED:
        if cfg.antenna_limited:
            return cfg.slots_per_freq
        return cfg.dedicated_slots
    if cfg.blocks_per_pldu < 1:
        raise ValueError("random access needs blocks_per_pldu >= 1")
    reachable = cfg.slots_per_freq if cfg.antenna_limited else cfg.random_slots
    return reachable // cfg.blocks_per_pldu


def fair_share(slots_available: int, n_users: int, demands=None) -> list[int]:
    """Max-min fair integer split of ``slots_available`` among ``n_users``.

    ``demands`` optionally caps each user. Users are taken to be listed in
    arrival order; leftover slots that cannot be split evenly go to the
    earliest users.
    """
    if n_users <= 0:
        return []
    if demands is None:
        demands = [slots_available] * n_users
    elif len(demands) != n_users:
        raise ValueError("need one demand per user")
    shares = [0] * n_users
    active = [i for i in range(n_users) if demands[i] > 0]
    remaining = max(0, slots_available)
    while active and remaining > 0:
        equal = remaining // len(active)
        if equal == 0:
            for i in active[:remaining]:
                shares[i] += 1
            break
        still = []
        for i in active:
            give = min(equal, demands[i] - shares[i])
            shares[i] += give
            remaining -= give
            if shares[i] < demands[i]:
                still.append(i)
        active = still
    return shares


def per_flow_frame_bit_cap(cfg: FrameConfig) -> int | float:
    """Bits one flow may send in one frame under ``max_throughput``."""
    if math.isinf(cfg.max_throughput):
        return math.inf
    return floor_eps(cfg.max_throughput * cfg.frame_duration)
