"""Summaries computed from an :class:`~pcasim.engine.EventTrace`."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .frame import TICKS_PER_SECOND
from .traffic import measure_throughput


@dataclass
class FlowStats:
    flow_id: int
    first_delivery_s: float = math.nan
    delivered_bytes: int = 0
    losses: int = 0
    mean_delay_s: float = math.nan


def delivery_log(trace):
    return [(r[0] / TICKS_PER_SECOND, r[2], r[3], r[4]) for r in trace.rows if r[1] == "delivery"]


def flow_summary(trace) -> list[FlowStats]:
    """Per-flow totals; delay runs from queue arrival to sink delivery."""
    stats: dict[int, FlowStats] = {}
    arrived = {}
    delay_sum: dict[int, int] = {}
    delivered: dict[int, int] = {}
    for t, ev, flow, seq, nbytes, _, _ in trace.rows:
        if flow is None:
            continue
        s = stats.get(flow)
        if s is None:
            s = stats[flow] = FlowStats(flow)
            delay_sum[flow] = delivered[flow] = 0
        if ev == "arrival":
            arrived[flow, seq] = t
        elif ev in ("loss", "drop"):
            s.losses += 1
        elif ev == "delivery":
            if s.delivered_bytes == 0:
                s.first_delivery_s = t / TICKS_PER_SECOND
            s.delivered_bytes += nbytes
            delay_sum[flow] += t - arrived[flow, seq]
            delivered[flow] += 1
    for f, s in stats.items():
        if delivered[f]:
            s.mean_delay_s = delay_sum[f] / delivered[f] / TICKS_PER_SECOND
    return [stats[f] for f in sorted(stats)]


def link_throughput(trace, window: float = 1.0):
    link, _ = measure_throughput(delivery_log(trace), window, until=trace.duration or None)
    return link


def mean_link_throughput_mbps(trace, duration: float | None = None) -> float:
    duration = duration or trace.duration
    bits = sum(r[4] * 8 for r in trace.rows if r[1] == "delivery")
    return bits / duration / 1e6


def loss_rate(trace) -> float:
    """Fraction of packets leaving the queue that were lost (drops included)."""
    lost = sent = 0
    for r in trace.rows:
        if r[1] in ("loss", "drop"):
            lost += 1
        elif r[1] == "departure":
            sent += 1
    total = lost + sent
    return lost / total if total else 0.0


def first_delivery(trace, flow: int) -> float:
    for r in trace.rows:
        if r[1] == "delivery" and r[2] == flow:
            return r[0] / TICKS_PER_SECOND
    return math.inf


def service_time(trace, flow: int, since: float = 0.0) -> float:
    """Mean seconds between consecutive queue exits of ``flow`` after ``since``.

    For a backlogged flow this is the time the access method needs per
    datagram.
    """
    start = round(since * TICKS_PER_SECOND)
    times = [r[0] for r in trace.rows if r[1] in ("departure", "loss") and r[2] == flow and r[0] >= start]
    if len(times) < 2:
        return math.inf
    return (times[-1] - times[0]) / (len(times) - 1) / TICKS_PER_SECOND
