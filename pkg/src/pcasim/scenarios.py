"""Bundled DVB-RCS2 return-link use case (dedicated, CRDSA, MuSCA).

The parameter files transcribe the use-case table verbatim. The random
access performance tables shipped alongside are illustrative curves with
the right shape, not decoder measurements.
"""

from __future__ import annotations

from importlib import resources

from .config import ParsedConfig, parse_config
from .engine import FlowSpec, RunConfig
from .ra_loss import RaPerformanceTable, parse_ra_table

SCENARIOS = ("dedicated", "crdsa", "musca")
_TABLES = {"crdsa": "crdsa.txt", "musca": "musca.txt"}


def data_path(name: str):
    return resources.files("pcasim") / "data" / name


def config_text(name: str) -> str:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; choose from {SCENARIOS}")
    return data_path(f"usecase_{name}.cfg").read_text()


def load(name: str) -> tuple[ParsedConfig, RaPerformanceTable | None]:
    cfg = parse_config(config_text(name))
    table = None
    if name in _TABLES:
        table = parse_ra_table(data_path(_TABLES[name]).read_text())
    return cfg, table


def run_config(name: str, n_flows: int = 1, seed: int = 0, duration: float | None = None, cbr_mbps=None):
    """A RunConfig of ``n_flows`` greedy window flows starting at t=0."""
    parsed, table = load(name)
    flows = [FlowSpec("window", size_bytes=parsed.run.datagram_bytes) for _ in range(n_flows)]
    if cbr_mbps:
        flows.append(FlowSpec("cbr", rate_mbps=cbr_mbps, size_bytes=parsed.run.datagram_bytes))
    return RunConfig(
        frame=parsed.frame,
        queue=parsed.queue,
        flows=flows,
        duration=parsed.run.duration if duration is None else duration,
        seed=seed,
        ra_table=table,
    )
