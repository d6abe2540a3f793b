import pytest
from hypothesis import given, strategies as st

from pcasim.traffic import (
    CONGESTION_AVOIDANCE,
    SLOW_START,
    CbrSource,
    SinkState,
    WindowSource,
    measure_throughput,
    source_on_ack,
    source_on_loss,
    source_on_tick,
)


def test_window_fills():
    src = WindowSource(0, window=2)
    assert [d.seqno for d in source_on_tick(src, 0.0)] == [0, 1]
    assert source_on_tick(src, 0.0) == []


def test_slow_start_step():
    src = WindowSource(0)
    src.emit()
    source_on_ack(src, 0)
    assert src.window == 2 and src.state == SLOW_START


def test_enters_congestion_avoidance_at_threshold():
    src = WindowSource(0, window=3, ssthresh=4)
    src.emit()
    src.on_ack(0)
    assert src.window == 4 and src.state == CONGESTION_AVOIDANCE
    assert WindowSource(0, window=4, ssthresh=4).state == CONGESTION_AVOIDANCE


def test_additive_increase():
    src = WindowSource(0, window=4, ssthresh=4)
    src.emit()
    for s in range(4):
        src.on_ack(s)
    assert src.window == 5


def test_unknown_ack_ignored():
    src = WindowSource(0)
    src.emit()
    src.on_ack(42)
    src.on_ack(0)
    src.on_ack(0)
    assert src.window == 2


def test_cumulative_ack_clears():
    src = WindowSource(0, window=4, ssthresh=100)
    src.emit()
    src.on_ack(3, cumulative=3)
    assert src.unacked == set() and src.window == 8


@pytest.mark.parametrize("window, thresh", [(8, 4), (1, 1)])
def test_halving(window, thresh):
    src = WindowSource(0, window=window)
    src.emit()
    source_on_loss(src, 0)
    assert src.ssthresh == thresh and src.window == thresh
    assert src.state == CONGESTION_AVOIDANCE


def test_retransmit_first():
    src = WindowSource(0, window=12, ssthresh=100)
    src.emit()
    assert src.next_seqno == 12
    src.on_loss(7)
    for s in range(12):
        if s != 7:
            src.on_ack(s)
    assert src.emit()[0].seqno == 7


def test_one_halving_per_window():
    src = WindowSource(0, window=16, ssthresh=100)
    src.emit()
    src.on_loss(2)
    src.on_loss(5)
    assert src.window == 8
    assert src.retransmit == [2, 5]


def test_cbr_rate_zero():
    assert source_on_tick(CbrSource(0, 0), 100.0) == []


def test_cbr_interval():
    src = CbrSource(0, 1e6, 12000)
    assert src.interval == pytest.approx(0.012)
    assert len(src.emit(0.0)) == 1
    assert src.emit(0.011) == []
    assert len(src.emit(0.012)) == 1
    assert len(src.emit(0.120)) == 9


def test_sink_in_order():
    sink = SinkState()
    sink.deliver(0.1, 0, 0, 1500)
    sink.deliver(0.2, 0, 2, 1500)
    assert sink.in_order[0] == 0
    sink.deliver(0.3, 0, 1, 1500)
    assert sink.in_order[0] == 2
    with pytest.raises(ValueError):
        sink.deliver(0.2, 0, 3, 1500)


def test_throughput_empty():
    assert measure_throughput([], 1.0) == ([], {})


def test_throughput_one_mbps():
    # 45000 bits (5625 bytes) every 45 ms
    log = [(0.045 * k, 0, k, 5625) for k in range(400)]
    link, _ = measure_throughput(log, 0.9)
    assert all(mbps == pytest.approx(1.0) for _, mbps in link[:-1])
    link, _ = measure_throughput(log, 1.0)
    # 22 or 23 frames fall inside a 1 s window
    assert {round(m, 6) for _, m in link[:-1]} <= {0.99, 1.035}
    full = link[:-1]
    assert sum(m for _, m in full) / len(full) == pytest.approx(1.0, abs=0.025)


def test_throughput_two_flows_sum():
    log = []
    for k in range(100):
        log.append((0.09 * k, 0, k, 5625))
        log.append((0.09 * k, 1, k, 5625))
    link, per = measure_throughput(log, 0.9)
    assert [round(m, 9) for _, m in per[0][:-1]] == [0.5] * (len(per[0]) - 1)
    assert [round(m, 9) for _, m in link[:-1]] == [1.0] * (len(link) - 1)


def test_throughput_until_pads():
    link, _ = measure_throughput([(0.5, 0, 0, 125)], 1.0, until=3.0)
    assert [t for t, _ in link] == [1.0, 2.0, 3.0]
    assert link[0][1] == pytest.approx(0.001)


@given(st.lists(st.sampled_from(["ack", "emit"]), max_size=200))
def test_window_grows_without_loss(ops):
    src = WindowSource(0, ssthresh=8)
    last = src.window
    for op in ops:
        if op == "emit":
            src.emit()
        elif src.unacked:
            src.on_ack(min(src.unacked))
        assert src.window >= last
        assert len(src.unacked) <= src.window
        last = src.window


@given(st.lists(st.tuples(st.sampled_from(["ack", "loss"]), st.integers(0, 30)), max_size=300))
def test_lost_seqnos_reemitted_until_acked(ops):
    src = WindowSource(0, window=4)
    acked = set()
    emitted = []
    emitted += [d.seqno for d in src.emit()]
    for op, pick in ops:
        if not src.unacked:
            break
        seq = sorted(src.unacked)[pick % len(src.unacked)]
        if op == "ack":
            src.on_ack(seq)
            acked.add(seq)
        else:
            src.on_loss(seq)
        new = [d.seqno for d in src.emit()]
        assert not acked & set(new)  # never resend delivered data
        emitted += new
        assert src.window >= 1
    outstanding = src.unacked | set(src.retransmit)
    assert outstanding | acked == set(range(src.next_seqno))
