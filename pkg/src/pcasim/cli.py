"""Command line driver: ``pcasim run`` and ``pcasim sweep``."""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .engine import FlowSpec, RunConfig, run
from .metrics import flow_summary, link_throughput, loss_rate, mean_link_throughput_mbps
from .ra_loss import RaTableError, load_ra_table

SWEEP_COLUMNS = ("access_mode", "n_flows", "seed", "mean_link_throughput_mbps", "loss_rate")


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else f"{x:.6f}"


def access_mode(switch_threshold: float) -> str:
    if switch_threshold <= 0:
        return "dedicated"
    if math.isinf(switch_threshold):
        return "random"
    return "hybrid"


def _load(args):
    parsed = parse_config(Path(args.config).read_text())
    table = load_ra_table(args.ra_table) if args.ra_table else None
    return parsed, table


def _run_config(parsed, table, n_flows, seed, duration, cbr=None):
    size = parsed.run.datagram_bytes
    flows = [FlowSpec("window", size_bytes=size) for _ in range(n_flows)]
    if cbr:
        flows.append(FlowSpec("cbr", rate_mbps=cbr, size_bytes=size))
    return RunConfig(parsed.frame, parsed.queue, flows, duration, seed, table)


def _writer(path):
    fp = open(path, "w", newline="")
    return fp, csv.writer(fp, lineterminator="\n")


def cmd_run(args) -> int:
    parsed, table = _load(args)
    duration = parsed.run.duration if args.duration is None else args.duration
    trace = run(_run_config(parsed, table, args.flows, args.seed, duration, args.cbr))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "trace.csv", "w", newline="") as fp:
        trace.write_csv(fp)
    fp, w = _writer(out / "flows.csv")
    with fp:
        w.writerow(("flow_id", "first_delivery_s", "delivered_bytes", "losses", "mean_delay_s"))
        for s in flow_summary(trace):
            w.writerow((s.flow_id, _fmt(s.first_delivery_s), s.delivered_bytes, s.losses, _fmt(s.mean_delay_s)))
    fp, w = _writer(out / "summary.csv")
    with fp:
        w.writerow(("time_s", "link_throughput_mbps"))
        for t, mbps in link_throughput(trace, 1.0):
            w.writerow((f"{t:.6f}", f"{mbps:.6f}"))
    return 0


def _flows_list(text: str) -> list[int]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ConfigError("--flows-list is empty")
    try:
        flows = [int(s) for s in items]
    except ValueError:
        raise ConfigError(f"--flows-list must be comma separated integers, got {text!r}") from None
    if any(n < 0 for n in flows):
        raise ConfigError("--flows-list entries must be >= 0")
    return flows


def cmd_sweep(args) -> int:
    parsed, table = _load(args)
    flows = _flows_list(args.flows_list)
    if args.seeds < 1:
        raise ConfigError("--seeds must be >= 1")
    mode = access_mode(parsed.queue.switch_threshold)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fp, w = _writer(out / "sweep.csv")
    with fp:
        w.writerow(SWEEP_COLUMNS)
        for n in flows:
            for seed in range(args.seeds):
                trace = run(_run_config(parsed, table, n, seed, parsed.run.duration))
                w.writerow((mode, n, seed, f"{mean_link_throughput_mbps(trace):.6f}", f"{loss_rate(trace):.6f}"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcasim", description="MF-TDMA access point emulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write trace/flows/summary CSVs")
    p.add_argument("--config", required=True)
    p.add_argument("--ra-table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--duration", type=float)
    p.add_argument("--flows", type=int, default=1)
    p.add_argument("--cbr", type=float, metavar="RATE_MBPS")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="mean link throughput over flow counts and seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--ra-table")
    p.add_argument("--flows-list", required=True)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, RaTableError, OSError) as e:
        print(f"pcasim: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
