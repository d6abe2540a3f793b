"""Traffic endpoints: greedy window sources, CBR sources and the sink.

The window source is a reduced Reno: slow start, additive increase, one
halving per window of data on loss, and retransmission of lost datagrams
ahead of new data. Losses are reported to it explicitly by the simulator,
so no retransmission timer exists.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

SLOW_START = "slow_start"
CONGESTION_AVOIDANCE = "congestion_avoidance"

DEFAULT_DATAGRAM_BITS = 1500 * 8


@dataclass(slots=True)
class Datagram:
    flow_id: int
    seqno: int
    size_bits: int


class WindowSource:
    def __init__(self, flow_id, size_bits=DEFAULT_DATAGRAM_BITS, window=1, ssthresh=64):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.flow_id = flow_id
        self.size_bits = size_bits
        self.window = window
        self.ssthresh = ssthresh
        self.state = SLOW_START if window < ssthresh else CONGESTION_AVOIDANCE
        self.next_seqno = 0
        self.unacked: set[int] = set()
        self.retransmit: list[int] = []  # kept sorted
        self._ca_acks = 0
        self._recover = 0  # losses below this seqno belong to an episode already reacted to

    def emit(self, now=None) -> list[Datagram]:
        out = []
        while len(self.unacked) < self.window:
            if self.retransmit:
                seq = self.retransmit.pop(0)
            else:
                seq = self.next_seqno
                self.next_seqno += 1
            self.unacked.add(seq)
            out.append(Datagram(self.flow_id, seq, self.size_bits))
        return out

    def _grow(self):
        if self.state == SLOW_START:
            self.window += 1
            if self.window >= self.ssthresh:
                self.state = CONGESTION_AVOIDANCE
                self._ca_acks = 0
        else:
            self._ca_acks += 1
            if self._ca_acks >= self.window:
                self.window += 1
                self._ca_acks = 0

    def on_ack(self, seqno, now=None, cumulative=None):
        acked = []
        if seqno in self.unacked:
            acked.append(seqno)
        if cumulative is not None:
            acked.extend(s for s in self.unacked if s < cumulative and s != seqno)
        for s in acked:
            self.unacked.discard(s)
            self._grow()

    def on_loss(self, seqno, now=None):
        if seqno not in self.unacked:
            return
        self.unacked.discard(seqno)
        bisect.insort(self.retransmit, seqno)
        if seqno >= self._recover:
            self.ssthresh = max(self.window // 2, 1)
            self.window = self.ssthresh
            self.state = CONGESTION_AVOIDANCE
            self._ca_acks = 0
            self._recover = self.next_seqno


class CbrSource:
    def __init__(self, flow_id, rate_bps, size_bits=DEFAULT_DATAGRAM_BITS, start=0.0):
        if rate_bps < 0:
            raise ValueError("rate must be >= 0")
        self.flow_id = flow_id
        self.rate_bps = rate_bps
        self.size_bits = size_bits
        self.start = start
        self.next_seqno = 0

    @property
    def interval(self) -> float:
        return self.size_bits / self.rate_bps if self.rate_bps > 0 else math.inf

    def next_time(self) -> float:
        """Emission time of the next datagram (inf if silent)."""
        return self.start + self.next_seqno * self.interval if self.rate_bps > 0 else math.inf

    def emit(self, now) -> list[Datagram]:
        out = []
        while self.next_time() <= now + 1e-12:
            out.append(Datagram(self.flow_id, self.next_seqno, self.size_bits))
            self.next_seqno += 1
        return out


def source_on_tick(src, now):
    return src.emit(now)


def source_on_ack(src, seqno, now=None):
    src.on_ack(seqno, now)
    return src


def source_on_loss(src, seqno, now=None):
    src.on_loss(seqno, now)
    return src


@dataclass
class SinkState:
    in_order: dict = field(default_factory=dict)  # flow -> highest in-order seqno
    log: list = field(default_factory=list)  # (time, flow, seqno, bytes)
    _held: dict = field(default_factory=dict, repr=False)

    def deliver(self, time, flow, seqno, nbytes):
        if self.log and time < self.log[-1][0]:
            raise ValueError("deliveries must be logged in time order")
        self.log.append((time, flow, seqno, nbytes))
        held = self._held.setdefault(flow, set())
        held.add(seqno)
        top = self.in_order.get(flow, -1)
        while top + 1 in held:
            top += 1
            held.discard(top)
        self.in_order[flow] = top
        return top


def measure_throughput(log, window: float, until: float | None = None):
    """Delivered Mbps per ``window``-second interval.

    ``log`` rows are ``(time_s, flow, seqno, bytes)``. Interval k covers
    ``[k*window, (k+1)*window)`` and is reported at its end time. Returns
    ``(link, per_flow)`` where ``link`` is a list of ``(time, mbps)`` and
    ``per_flow`` maps flow id to such a list.
    """
    if not window > 0:
        raise ValueError("window must be > 0")
    if not log and until is None:
        return [], {}
    w_us = round(window * 1e6)
    t_us = np.array([round(r[0] * 1e6) for r in log], dtype=np.int64)
    bits = np.array([r[3] * 8 for r in log], dtype=np.float64)
    flows = np.array([r[1] for r in log])
    idx = t_us // w_us
    n = int(idx.max()) + 1 if len(idx) else 0
    if until is not None:
        n = max(n, -(-round(until * 1e6) // w_us))
    ends = [(k + 1) * window for k in range(n)]

    def series(mask):
        per = np.bincount(idx[mask], weights=bits[mask], minlength=n)[:n]
        return [(t, float(b) / window / 1e6) for t, b in zip(ends, per)]

    link = series(np.ones(len(log), dtype=bool))
    per_flow = {f: series(flows == f) for f in dict.fromkeys(r[1] for r in log)}
    return link, per_flow
