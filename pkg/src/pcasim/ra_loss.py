"""Random-access performance tables.

A table maps channel quality (Es/N0, dB) and the number of users N_U
contending on one RA block to the probability that a packet cannot be
recovered. File layout, whitespace separated, ``#`` starts a comment::

    # thresholds: NbUser_1 ... NbUser_J
    1    2    4
    # Es/N0  P_1  ...  P_J
    4.0  0.01 0.10 0.50
    5.0  0.00 0.05 0.30

Column j covers ``NbUser_j <= N_U < NbUser_{j+1}``; the last column covers
everything from the last threshold upwards and N_U below the first
threshold never loses.
"""

from __future__ import annotations

import bisect
import io
import os
import re
from dataclasses import dataclass
from pathlib import Path


class RaTableError(ValueError):
    """Malformed performance table; message names line and column."""


class ChannelOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class RaPerformanceTable:
    user_thresholds: tuple[int, ...]
    esn0_rows: tuple[float, ...]
    loss_matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.user_thresholds or not self.esn0_rows:
            raise RaTableError("table needs at least one threshold and one row")
        if any(b <= a for a, b in zip(self.user_thresholds, self.user_thresholds[1:])):
            raise RaTableError("user thresholds must be strictly ascending")
        if any(b <= a for a, b in zip(self.esn0_rows, self.esn0_rows[1:])):
            raise RaTableError("Es/N0 rows must be strictly ascending")
        if len(self.loss_matrix) != len(self.esn0_rows):
            raise RaTableError("one matrix row per Es/N0 value required")
        for row in self.loss_matrix:
            if len(row) != len(self.user_thresholds):
                raise RaTableError("one probability per threshold band required")
            if any(not 0.0 <= p <= 1.0 for p in row):
                raise RaTableError("probabilities must lie in [0, 1]")

    def values(self) -> set[float]:
        return {p for row in self.loss_matrix for p in row}


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        cols = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]
        if cols:
            yield lineno, cols


def _number(tok: str, lineno: int, col: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise RaTableError(f"line {lineno}, column {col}: not a number: {tok!r}") from None


def parse_ra_table(text: str) -> RaPerformanceTable:
    lines = list(_tokens(text))
    if not lines:
        raise RaTableError("empty performance table")

    head_no, head = lines[0]
    body = lines[1:]
    # Layout with a corner cell and a closing all-zero column ("0 NbUser_1 ... NbUser_26 0"):
    # the zero column is a sentinel, dropped here.
    framed = (
        len(head) >= 3
        and _number(head[0][1], head_no, head[0][0]) == 0
        and _number(head[-1][1], head_no, head[-1][0]) == 0
    )
    if framed:
        head = head[:-1]
        trimmed = []
        for lineno, cols in body:
            col, tok = cols[-1]
            if len(cols) > 1 and _number(tok, lineno, col) != 0:
                raise RaTableError(f"line {lineno}, column {col}: closing sentinel column must be 0")
            trimmed.append((lineno, cols[:-1]))
        body = trimmed
        head = head[1:]

    thresholds = []
    for col, tok in head:
        v = _number(tok, head_no, col)
        if v != int(v) or v < 0:
            raise RaTableError(f"line {head_no}, column {col}: user threshold must be a non-negative integer")
        if thresholds and v <= thresholds[-1]:
            raise RaTableError(f"line {head_no}, column {col}: user thresholds must be strictly ascending")
        thresholds.append(int(v))

    rows, matrix = [], []
    for lineno, cols in body:
        if len(cols) != len(thresholds) + 1:
            raise RaTableError(
                f"line {lineno}, column {cols[-1][0]}: expected {len(thresholds) + 1} fields, got {len(cols)}"
            )
        col, tok = cols[0]
        esn0 = _number(tok, lineno, col)
        if rows and esn0 <= rows[-1]:
            raise RaTableError(f"line {lineno}, column {col}: Es/N0 rows must be strictly ascending")
        probs = []
        for col, tok in cols[1:]:
            p = _number(tok, lineno, col)
            if not 0.0 <= p <= 1.0:
                raise RaTableError(f"line {lineno}, column {col}: probability {p} outside [0, 1]")
            probs.append(p)
        rows.append(esn0)
        matrix.append(tuple(probs))

    if not rows:
        raise RaTableError(f"line {head_no}: table has thresholds but no Es/N0 rows")
    return RaPerformanceTable(tuple(thresholds), tuple(rows), tuple(matrix))


def load_ra_table(path: str | os.PathLike) -> RaPerformanceTable:
    return parse_ra_table(Path(path).read_text())


def serialize_ra_table(table: RaPerformanceTable) -> str:
    out = io.StringIO()
    out.write(" ".join(str(t) for t in table.user_thresholds) + "\n")
    for esn0, row in zip(table.esn0_rows, table.loss_matrix):
        out.write(" ".join([repr(esn0)] + [repr(p) for p in row]) + "\n")
    return out.getvalue()


def loss_probability(table: RaPerformanceTable, esn0: float, n_users: int) -> float:
    # floor on Es/N0: the nearest lower row is the pessimistic one
    i = bisect.bisect_right(table.esn0_rows, esn0) - 1
    if i < 0:
        raise ChannelOutOfRange(
            f"channel below table range: Es/N0 {esn0} dB < {table.esn0_rows[0]} dB"
        )
    j = bisect.bisect_right(table.user_thresholds, n_users) - 1
    if j < 0:
        return 0.0
    return table.loss_matrix[i][j]


def draw_loss(p: float, rng) -> bool:
    return rng.random() < p
