"""PCA queue discipline: access delay emulated as queueing delay.

Packets are admitted by :meth:`PcaQueue.enque` and released only at frame
boundaries by :meth:`PcaQueue.deque`, which also schedules how many bits
each waiting datagram gets on the next frame. Each flow's datagrams are
served strictly in order: only the flow's head packet is eligible, and
when it completes inside a frame the unused part of the flow's budget is
carried over to its successor.

Frame ``F`` is the boundary at time ``F * frame_duration``. Bits scheduled
during ``deque(F)`` travel on the frame that ends at boundary ``F + 1``,
where the packet that received its last bit is forwarded.
"""

from __future__ import annotations

import math
import random
from collections import deque as _deque
from dataclasses import dataclass, field

from .frame import (
    Access,
    FrameConfig,
    SlotBudget,
    ceil_eps,
    fair_share,
    per_flow_frame_bit_cap,
    per_user_slot_limit,
    to_ticks,
)
from .ra_loss import RaPerformanceTable, draw_loss, loss_probability

INF = math.inf


@dataclass
class QueueSettings:
    esn0: float = 5.0  # esN0_, dB
    switch_threshold: float = 0  # switchAleaDet_
    cut_connect: float = 3.0  # cutConnect_, s
    rtt: float = 0.5  # rtt_, s
    capacity: int | None = None  # packets; None = never overflows


@dataclass(slots=True, eq=False)
class PacketRecord:
    appl_id: int
    pkt_seqno: int
    size_bits: int
    bool_rand: bool
    frame_in: float = INF
    frame_out: float = INF
    bool_first_frame: bool = False
    bool_lost: bool = False
    bits_to_send: int = 0
    bits_next_frame: int = 0
    remaining_slot_frame_appl_det: int = 0
    remaining_slot_frame_appl_rnd: int = 0
    used_slot_frame_appl_rnd: int = 0
    enque_time: float = 0.0
    first_tx_frame: float = INF
    uid: int = 0

    @property
    def access(self) -> Access:
        return Access.RANDOM if self.bool_rand else Access.DEDICATED


@dataclass(slots=True)
class FlowRecord:
    appl_id: int
    pkt_seq: int = -1
    last_time_out: float = 0.0
    # bookkeeping beyond the applications list
    order: int = 0
    ra_block: int = 0
    reservation_frame: int = 0
    packets: _deque = field(default_factory=_deque)


def access_method_for(pkt_seqno: int, switch_threshold: float) -> Access:
    return Access.RANDOM if pkt_seqno < switch_threshold else Access.DEDICATED


class PcaQueue:
    """State of one PCA access point (packets list + applications list)."""

    def __init__(
        self,
        frame: FrameConfig,
        settings: QueueSettings | None = None,
        ra_table: RaPerformanceTable | None = None,
        rng=None,
    ):
        self.cfg = frame
        self.settings = settings or QueueSettings()
        self.ra_table = ra_table
        self.rng = rng if rng is not None else random.Random(0)
        self.frame = 0
        self.flows: dict[int, FlowRecord] = {}
        self.n_queued = 0
        self.establishment_frames = max(0, ceil_eps(self.settings.rtt / frame.frame_duration))
        self.last_budgets: dict[int, SlotBudget] = {}
        self.last_ra_users: dict[int, int] = {}
        self.last_exits: list[PacketRecord] = []
        self._uid = 0
        self._bit_cap = per_flow_frame_bit_cap(frame)
        self._ded_cap = self._slot_cap(Access.DEDICATED, frame.bits_per_slot_dedicated)
        self._rnd_cap = self._slot_cap(Access.RANDOM, frame.bits_per_ra_allocation)

    def _slot_cap(self, access, unit_bits):
        if access is Access.RANDOM and self.cfg.blocks_per_pldu < 1:
            return 0
        cap = per_user_slot_limit(self.cfg, access)
        if unit_bits > 0 and not math.isinf(self._bit_cap):
            cap = min(cap, int(self._bit_cap // unit_bits))
        return cap

    @property
    def packets(self) -> list[PacketRecord]:
        out = [p for f in self.flows.values() for p in f.packets]
        out.sort(key=lambda p: p.uid)
        return out

    def connection_check(self, appl_id, now: float) -> str:
        flow = self.flows.get(appl_id)
        if flow is None:
            return "new"
        if flow.packets:
            return "open"
        if now - flow.last_time_out > self.settings.cut_connect:
            return "reopened"
        return "open"

    def enque(self, appl_id, pkt_seqno: int, size_bits: int, now: float) -> PacketRecord | None:
        """Register a datagram; returns None if a capacity bound drops it."""
        if size_bits <= 0:
            raise ValueError("packet size must be > 0")
        cap = self.settings.capacity
        if cap is not None and self.n_queued >= cap:
            return None

        status = self.connection_check(appl_id, now)
        flow = self.flows.get(appl_id)
        if flow is None:
            order = len(self.flows)
            n_blocks = self.cfg.n_ra_blocks
            flow = FlowRecord(appl_id, order=order, ra_block=order % n_blocks if n_blocks else 0)
            self.flows[appl_id] = flow
        if status != "open":
            flow.pkt_seq = -1
            flow.last_time_out = now
            flow.reservation_frame = self.frame + self.establishment_frames

        rand = access_method_for(pkt_seqno, self.settings.switch_threshold) is Access.RANDOM
        rec = PacketRecord(
            appl_id, pkt_seqno, size_bits, rand, bits_to_send=size_bits, enque_time=now, uid=self._uid
        )
        self._uid += 1
        q = flow.packets
        # packets complete in order, so an unfinished one exists iff the tail is unfinished
        if not q or q[-1].frame_out != INF:
            rec.bool_first_frame = status != "open"
            rec.frame_in = self.frame if rand else max(self.frame, flow.reservation_frame)
        q.append(rec)
        self.n_queued += 1
        return rec

    def _run_demand(self, q, limit):
        """Bits queued in the leading same-access run, counted up to ``limit``."""
        rand = q[0].bool_rand
        total = 0
        for p in q:
            if p.bool_rand != rand:
                break
            total += p.bits_to_send
            if total >= limit:
                break
        return total

    def allocate_slots(self, frame: int) -> dict[int, SlotBudget]:
        """Per-flow budgets for frame ``frame + 1``."""
        cfg = self.cfg
        ded_ids, ded_demand = [], []
        budgets = {}
        for fid, flow in self.flows.items():
            q = flow.packets
            if not q or q[0].frame_in > frame:
                continue
            head = q[0]
            if head.bool_rand:
                unit = cfg.bits_per_ra_allocation
                bits = self._run_demand(q, self._rnd_cap * unit)
                n = min(-(-bits // unit), self._rnd_cap)
                budgets[fid] = SlotBudget(Access.RANDOM, n, n * unit)
                head.remaining_slot_frame_appl_rnd = n
            else:
                unit = cfg.bits_per_slot_dedicated
                bits = self._run_demand(q, self._ded_cap * unit)
                ded_ids.append(fid)
                ded_demand.append(min(-(-bits // unit), self._ded_cap))
        shares = fair_share(cfg.dedicated_slots, len(ded_ids), ded_demand)
        unit = cfg.bits_per_slot_dedicated
        for fid, s in zip(ded_ids, shares):
            budgets[fid] = SlotBudget(Access.DEDICATED, s, s * unit)
            self.flows[fid].packets[0].remaining_slot_frame_appl_det = s
        # keep the arrival-order iteration stable regardless of access kind
        return {fid: budgets[fid] for fid in self.flows if fid in budgets}

    def adapt_bits_next_frame(self, frame: int, budgets: dict[int, SlotBudget]):
        F = frame
        ra_users: dict[int, int] = {}
        contenders = []
        for fid, budget in budgets.items():
            flow = self.flows[fid]
            q = flow.packets
            pool = budget.bits_granted
            rand = budget.access_kind is Access.RANDOM
            if rand:
                q[0].used_slot_frame_appl_rnd = budget.slots_granted * self.cfg.blocks_per_pldu
                if budget.slots_granted > 0:
                    ra_users[flow.ra_block] = ra_users.get(flow.ra_block, 0) + 1
            i = 0
            n = len(q)
            while i < n:
                p = q[i]
                send = min(pool, p.bits_to_send)
                p.bits_next_frame = send
                if send > 0:
                    if p.first_tx_frame == INF:
                        p.first_tx_frame = F + 1
                    if rand:
                        contenders.append((flow.ra_block, p))
                remaining = p.bits_to_send - pool
                if remaining > 0:
                    p.bits_to_send = remaining
                    break
                p.bits_to_send = 0
                p.frame_out = F + 1
                pool = -remaining
                i += 1
                if i == n:
                    break
                nxt = q[i]
                if nxt.bool_rand != p.bool_rand:
                    # surplus of one access kind cannot pay for the other
                    nxt.frame_in = F if nxt.bool_rand else max(F, flow.reservation_frame)
                    break
                nxt.frame_in = F

        if contenders:
            if self.ra_table is None:
                raise RuntimeError("random access scheduled without a performance table")
            esn0 = self.settings.esn0
            for block, p in contenders:
                prob = loss_probability(self.ra_table, esn0, ra_users[block])
                if draw_loss(prob, self.rng):
                    p.bool_lost = True
        self.last_budgets = budgets
        self.last_ra_users = ra_users

    def deque(self, frame: int, now: float | None = None):
        """Frame boundary: forward finished packets, then plan the next frame.

        Returns ``(departures, losses)``; ``last_exits`` keeps both in
        flow-arrival order, then sequence order.
        """
        if frame != self.frame + 1:
            raise ValueError(f"deque must be called once per frame: expected {self.frame + 1}, got {frame}")
        self.frame = frame
        if now is None:
            now = frame * self.cfg.frame_duration
        departures, losses, exits = [], [], []
        for flow in self.flows.values():
            q = flow.packets
            while q and q[0].frame_out == frame:
                p = q.popleft()
                self.n_queued -= 1
                flow.pkt_seq = p.pkt_seqno
                flow.last_time_out = now
                (losses if p.bool_lost else departures).append(p)
                exits.append(p)
        self.last_exits = exits
        self.adapt_bits_next_frame(frame, self.allocate_slots(frame))
        return departures, losses


def replay(queue: PcaQueue, arrivals, n_frames: int):
    """Drive ``queue`` with a fixed arrival list for the next ``n_frames`` boundaries.

    ``arrivals`` holds ``(time_s, appl_id, pkt_seqno, size_bits)``. A frame
    boundary at the same instant as an arrival is processed first. Returns
    ``(record, frame, lost)`` for every packet that left the queue.
    """
    tf = to_ticks(queue.cfg.frame_duration)
    pending = sorted(arrivals, key=lambda a: to_ticks(a[0]))
    out = []
    i = 0
    for k in range(queue.frame + 1, queue.frame + n_frames + 1):
        while i < len(pending) and to_ticks(pending[i][0]) < k * tf:
            t, fid, seq, bits = pending[i]
            queue.enque(fid, seq, bits, t)
            i += 1
        deps, losses = queue.deque(k)
        out.extend((p, k, False) for p in deps)
        out.extend((p, k, True) for p in losses)
    return out
