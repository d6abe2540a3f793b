import random

import pytest
from hypothesis import given, strategies as st

from pcasim.ra_loss import (
    ChannelOutOfRange,
    RaPerformanceTable,
    RaTableError,
    draw_loss,
    loss_probability,
    parse_ra_table,
    serialize_ra_table,
)
from pcasim.scenarios import data_path


SMALL = "10 20\n5.0 0.1 0.4\n"


def test_parse_small_table():
    t = parse_ra_table(SMALL)
    assert t == RaPerformanceTable((10, 20), (5.0,), ((0.1, 0.4),))


def test_parse_ignores_comments():
    t = parse_ra_table("# header\n10 20  # thresholds\n\n5.0 0.1 0.4\n")
    assert t.user_thresholds == (10, 20)


@pytest.mark.parametrize("text, where", [
    ("", "empty"),
    ("# only a comment\n", "empty"),
    ("10 20\n5.0 0.1 1.3\n", "line 2, column 9"),
    ("10 20\n5.0 0.1\n", "line 2"),
    ("20 10\n5.0 0.1 0.2\n", "line 1, column 4"),
    ("10 20\n5.0 0.1 0.2\n4.0 0.1 0.2\n", "line 3, column 1"),
    ("10 20\n5.0 0.1 abc\n", "line 2, column 9"),
    ("10 20\n", "no Es/N0 rows"),
])
def test_parse_errors(text, where):
    with pytest.raises(RaTableError, match=where):
        parse_ra_table(text)


def test_lookup_examples():
    t = parse_ra_table(SMALL)
    assert loss_probability(t, 5.0, 15) == 0.1
    assert loss_probability(t, 5.0, 0) == 0.0
    assert loss_probability(t, 7.3, 25) == 0.4
    assert loss_probability(t, 5.0, 10) == 0.1
    assert loss_probability(t, 5.0, 20) == 0.4


def test_lookup_floor_row():
    t = parse_ra_table("1 2\n4.0 0.3 0.6\n6.0 0.1 0.2\n")
    assert loss_probability(t, 5.9, 1) == 0.3
    assert loss_probability(t, 6.0, 1) == 0.1
    with pytest.raises(ChannelOutOfRange, match="channel below table range"):
        loss_probability(t, 3.9, 1)


def test_draw_loss_extremes():
    rng = random.Random(1)
    assert not any(draw_loss(0.0, rng) for _ in range(1000))
    assert all(draw_loss(1.0, rng) for _ in range(1000))


def test_draw_loss_half():
    rng = random.Random(12345)
    frac = sum(draw_loss(0.5, rng) for _ in range(10000)) / 10000
    # 10000 Bernoulli(0.5): sd = 0.005, so [0.48, 0.52] is a 4-sigma band
    assert 0.48 <= frac <= 0.52


def test_draw_loss_deterministic():
    a, b = random.Random(3), random.Random(3)
    assert [draw_loss(0.3, a) for _ in range(200)] == [draw_loss(0.3, b) for _ in range(200)]


@pytest.mark.parametrize("name", ["crdsa.txt", "musca.txt"])
def test_bundled_tables(name):
    t = parse_ra_table(data_path(name).read_text())
    assert len(t.user_thresholds) == 26
    for row in t.loss_matrix:
        assert list(row) == sorted(row)


probs = st.floats(0, 1, allow_nan=False)


@st.composite
def tables(draw, monotone=False):
    th = sorted(draw(st.sets(st.integers(0, 60), min_size=1, max_size=8)))
    rows = sorted(draw(st.sets(st.floats(-10, 30, allow_nan=False), min_size=1, max_size=5)))
    matrix = []
    for _ in rows:
        row = draw(st.lists(probs, min_size=len(th), max_size=len(th)))
        matrix.append(tuple(sorted(row) if monotone else row))
    return RaPerformanceTable(tuple(th), tuple(rows), tuple(matrix))


@given(tables())
def test_round_trip(table):
    assert parse_ra_table(serialize_ra_table(table)) == table


@given(tables(monotone=True), st.floats(-10, 40, allow_nan=False), st.integers(0, 80), st.integers(0, 80))
def test_monotone_in_users(table, esn0, a, b):
    if esn0 < table.esn0_rows[0]:
        return
    lo, hi = sorted((a, b))
    assert loss_probability(table, esn0, lo) <= loss_probability(table, esn0, hi)


@given(tables(), st.floats(-10, 40, allow_nan=False), st.integers(0, 80))
def test_no_interpolation(table, esn0, n):
    if esn0 < table.esn0_rows[0]:
        return
    assert loss_probability(table, esn0, n) in table.values() | {0.0}


def test_corner_and_sentinel_layout():
    text = "0 1 3 0\n4.0 0.1 0.5 0\n5.0 0.05 0.4 0\n"
    t = parse_ra_table(text)
    assert t.user_thresholds == (1, 3)
    assert t.loss_matrix == ((0.1, 0.5), (0.05, 0.4))
    assert loss_probability(t, 5.0, 30) == 0.4


def test_nonzero_sentinel_rejected():
    with pytest.raises(RaTableError, match="line 2, column 13"):
        parse_ra_table("0 1 3 0\n4.0 0.1 0.5 0.2\n")
