"""Discrete-event core.

Time is an integer count of microseconds. The frame timer fires at every
``k * frame_duration`` (k >= 1) and calls the queue's ``deque``. When a
frame boundary and another event share an instant the boundary runs
first; otherwise events run in insertion order.

Topology: sources sit at the access point, so a datagram reaches the
queue the moment it is emitted. Departures need ``rtt/2`` to reach the
sink and acknowledgements ``rtt/2`` to come back. A packet the random
access channel failed to deliver is reported to its source one full
``rtt`` after its last frame, like an ack that never came.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
import random
from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

from .config import ConfigError
from .frame import FrameConfig, TICKS_PER_SECOND, to_ticks
from .pca import PcaQueue, QueueSettings
from .ra_loss import ChannelOutOfRange, RaPerformanceTable, loss_probability
from .traffic import CbrSource, DEFAULT_DATAGRAM_BITS, SinkState, WindowSource


class EventKind(IntEnum):
    FRAME_BOUNDARY = 0
    PACKET_ARRIVAL = 1
    DELIVERY_AT_SINK = 2
    ACK_AT_SOURCE = 3
    SOURCE_TICK = 4


class Event(NamedTuple):
    time: int  # ticks
    rank: int  # 0 for frame boundaries, so they win ties
    counter: int
    kind: EventKind
    payload: object


@dataclass
class FlowSpec:
    kind: str = "window"  # or "cbr"
    start: float = 0.0
    rate_mbps: float = 0.0
    size_bytes: int = DEFAULT_DATAGRAM_BITS // 8


@dataclass
class RunConfig:
    frame: FrameConfig
    queue: QueueSettings = field(default_factory=QueueSettings)
    flows: list = field(default_factory=list)
    duration: float = 20.0
    seed: int = 0
    ra_table: RaPerformanceTable | None = None

    def __post_init__(self):
        if not self.duration > 0:
            raise ConfigError("duration must be > 0")


def seed_rng(seed: int) -> random.Random:
    """Mersenne Twister (MT19937) stream, identical on every platform."""
    return random.Random(seed)


TRACE_COLUMNS = ("time_s", "event", "flow_id", "seqno", "bytes", "frame_index", "detail")


def format_time(ticks: int) -> str:
    return f"{ticks // TICKS_PER_SECOND}.{ticks % TICKS_PER_SECOND:06d}"


class EventTrace:
    """Rows of ``(ticks, event, flow_id, seqno, bytes, frame_index, detail)``.

    ``None`` marks a column that does not apply to the event.
    """

    def __init__(self, rows=None, duration: float = 0.0):
        self.rows = rows if rows is not None else []
        self.duration = duration

    def __len__(self):
        return len(self.rows)

    def select(self, event: str):
        return [r for r in self.rows if r[1] == event]

    def times(self, event: str) -> list[float]:
        return [r[0] / TICKS_PER_SECOND for r in self.rows if r[1] == event]

    def write_csv(self, fp):
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for t, ev, flow, seq, nbytes, frame, detail in self.rows:
            w.writerow((
                format_time(t), ev,
                "" if flow is None else flow,
                "" if seq is None else seq,
                "" if nbytes is None else nbytes,
                "" if frame is None else frame,
                detail or "",
            ))

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, fp) -> "EventTrace":
        reader = csv.reader(fp)
        header = next(reader)
        if tuple(header) != TRACE_COLUMNS:
            raise ValueError(f"unexpected trace header {header}")
        rows = []
        for line in reader:
            if len(line) != len(TRACE_COLUMNS):
                raise ValueError(f"ragged trace row {line}")
            t, ev, flow, seq, nbytes, frame, detail = line
            sec, _, frac = t.partition(".")
            rows.append((
                int(sec) * TICKS_PER_SECOND + int(frac.ljust(6, "0")), ev,
                int(flow) if flow else None,
                int(seq) if seq else None,
                int(nbytes) if nbytes else None,
                int(frame) if frame else None,
                detail or None,
            ))
        return cls(rows)


def _uses_random(cfg: RunConfig) -> bool:
    return cfg.queue.switch_threshold > 0


def _uses_dedicated(cfg: RunConfig) -> bool:
    return not math.isinf(cfg.queue.switch_threshold)


def validate(cfg: RunConfig):
    f = cfg.frame
    if (f.freq_random > 0 or _uses_random(cfg)) and cfg.ra_table is None:
        raise ConfigError("random access configured but no random access performance table given")
    if _uses_random(cfg):
        if f.freq_random == 0:
            raise ConfigError("switchAleaDet_ > 0 needs freqRandom_ > 0")
        if f.bits_per_ra_allocation <= 0:
            raise ConfigError("random access needs sizeSlotRandom_ > 0")
        if f.n_ra_blocks == 0:
            raise ConfigError("RA block larger than the random part of the frame")
        try:
            loss_probability(cfg.ra_table, cfg.queue.esn0, 1)
        except ChannelOutOfRange as e:
            raise ConfigError(str(e)) from None
    if _uses_dedicated(cfg):
        if f.freq_dedicated == 0:
            raise ConfigError("dedicated access configured but freqDeter_ = 0")
        if f.bits_per_slot_dedicated <= 0:
            raise ConfigError("dedicated access needs sizeSlotDeter_ > 0")
    if to_ticks(f.frame_duration) <= 0:
        raise ConfigError("frameDuration_ shorter than the 1 us clock tick")
    for spec in cfg.flows:
        if spec.kind not in ("window", "cbr"):
            raise ConfigError(f"unknown flow kind {spec.kind!r}")
        if spec.size_bytes <= 0:
            raise ConfigError("datagram size must be > 0")


class Simulator:
    def __init__(self, cfg: RunConfig):
        validate(cfg)
        self.cfg = cfg
        self.rng = seed_rng(cfg.seed)
        self.queue = PcaQueue(cfg.frame, cfg.queue, cfg.ra_table, self.rng)
        self.sink = SinkState()
        self.trace = EventTrace(duration=cfg.duration)
        self.sources = []
        for i, spec in enumerate(cfg.flows):
            bits = spec.size_bytes * 8
            if spec.kind == "window":
                self.sources.append(WindowSource(i, bits))
            else:
                self.sources.append(CbrSource(i, spec.rate_mbps * 1e6, bits, spec.start))
        self._heap: list[Event] = []
        self._counter = 0
        self.now = 0
        self.end = to_ticks(cfg.duration)
        self.frame_ticks = to_ticks(cfg.frame.frame_duration)
        self.half_rtt = to_ticks(cfg.queue.rtt / 2)

    def schedule(self, time: int, kind: EventKind, payload=None):
        if time > self.end:
            return
        rank = 0 if kind is EventKind.FRAME_BOUNDARY else 1
        heapq.heappush(self._heap, Event(time, rank, self._counter, kind, payload))
        self._counter += 1

    def run(self) -> EventTrace:
        self.schedule(self.frame_ticks, EventKind.FRAME_BOUNDARY, 1)
        for i, spec in enumerate(self.cfg.flows):
            self.schedule(to_ticks(spec.start), EventKind.SOURCE_TICK, i)
        handlers = {
            EventKind.FRAME_BOUNDARY: self._on_frame,
            EventKind.PACKET_ARRIVAL: self._on_arrival,
            EventKind.DELIVERY_AT_SINK: self._on_delivery,
            EventKind.ACK_AT_SOURCE: self._on_ack,
            EventKind.SOURCE_TICK: self._on_tick,
        }
        heap = self._heap
        while heap:
            ev = heapq.heappop(heap)
            self.now = ev.time
            handlers[ev.kind](ev.payload)
        return self.trace

    def _emit(self, src):
        for d in src.emit(self.now / TICKS_PER_SECOND):
            self.schedule(self.now, EventKind.PACKET_ARRIVAL, d)

    def _on_tick(self, i):
        src = self.sources[i]
        self._emit(src)
        if isinstance(src, CbrSource):
            t = src.next_time()
            if not math.isinf(t):
                self.schedule(max(to_ticks(t), self.now + 1), EventKind.SOURCE_TICK, i)

    def _on_arrival(self, d):
        rec = self.queue.enque(d.flow_id, d.seqno, d.size_bits, self.now / TICKS_PER_SECOND)
        nbytes = -(-d.size_bits // 8)
        row = (self.now, "arrival", d.flow_id, d.seqno, nbytes, self.queue.frame, None)
        if rec is None:
            self.trace.rows.append(row)
            self.trace.rows.append((self.now, "drop", d.flow_id, d.seqno, nbytes, self.queue.frame, None))
            self.schedule(self.now + 2 * self.half_rtt, EventKind.ACK_AT_SOURCE, (d.flow_id, d.seqno, True))
            return
        self.trace.rows.append(row[:6] + (rec.access.value,))

    def _on_frame(self, k):
        rows = self.trace.rows
        rows.append((self.now, "frame_boundary", None, None, None, k, None))
        self.queue.deque(k, self.now / TICKS_PER_SECOND)
        for p in self.queue.last_exits:
            nbytes = -(-p.size_bits // 8)
            if p.bool_lost:
                rows.append((self.now, "loss", p.appl_id, p.pkt_seqno, nbytes, k, p.access.value))
                self.schedule(self.now + 2 * self.half_rtt, EventKind.ACK_AT_SOURCE, (p.appl_id, p.pkt_seqno, True))
            else:
                rows.append((self.now, "departure", p.appl_id, p.pkt_seqno, nbytes, k, p.access.value))
                self.schedule(self.now + self.half_rtt, EventKind.DELIVERY_AT_SINK, (p.appl_id, p.pkt_seqno, nbytes, k))
        self.schedule(self.now + self.frame_ticks, EventKind.FRAME_BOUNDARY, k + 1)

    def _on_delivery(self, payload):
        flow, seq, nbytes, k = payload
        self.sink.deliver(self.now / TICKS_PER_SECOND, flow, seq, nbytes)
        self.trace.rows.append((self.now, "delivery", flow, seq, nbytes, k, None))
        if isinstance(self.sources[flow], WindowSource):
            self.schedule(self.now + self.half_rtt, EventKind.ACK_AT_SOURCE, (flow, seq, False))

    def _on_ack(self, payload):
        flow, seq, lost = payload
        src = self.sources[flow]
        if not isinstance(src, WindowSource):
            return
        self.trace.rows.append((self.now, "nack" if lost else "ack", flow, seq, None, self.queue.frame, None))
        if lost:
            src.on_loss(seq, self.now / TICKS_PER_SECOND)
        else:
            src.on_ack(seq, self.now / TICKS_PER_SECOND)
        self._emit(src)


def run(cfg: RunConfig) -> EventTrace:
    return Simulator(cfg).run()
