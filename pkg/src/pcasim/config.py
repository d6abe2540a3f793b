"""Parameter files using the NS-2 queue parameter names.

One ``name value`` pair per line; ``#`` starts a comment. Lines written
the NS-2 way (``Queue/DropTail/PCA set name value``) are accepted too.
A value of ``xx`` marks a parameter the configured access mode does not
use, the same as leaving it out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .frame import FrameConfig
from .pca import QueueSettings


class ConfigError(ValueError):
    pass


PARAMETERS = (
    "cutConnect_",
    "esN0_",
    "switchAleaDet_",
    "frameDuration_",
    "nbSlotPerFreq_",
    "sizeSlotRandom_",
    "sizeSlotDeter_",
    "rtt_",
    "freqRandom_",
    "nbFreqPerRand_",
    "freqDeter_",
    "maxThroughtput_",
    "nbSlotRndFreqGroup_",
    "boolAntennaLimit_",
)
RANDOM_ONLY = ("sizeSlotRandom_", "nbSlotRndFreqGroup_", "nbFreqPerRand_")
DEDICATED_ONLY = ("sizeSlotDeter_",)
NS2_PREFIX = ("Queue/DropTail/PCA", "set")


@dataclass(frozen=True)
class RunDefaults:
    duration: float = 20.0
    datagram_bytes: int = 1500


class ParsedConfig(NamedTuple):
    frame: FrameConfig
    queue: QueueSettings
    run: RunDefaults


def read_parameters(text: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split("#", 1)[0].split()
        if not fields:
            continue
        if tuple(fields[:2]) == NS2_PREFIX:
            fields = fields[2:]
        if len(fields) == 3 and fields[2].lower() == "mbps":
            fields = fields[:2]
        if len(fields) != 2:
            raise ConfigError(f"line {lineno}: expected 'name value', got {line.strip()!r}")
        key, value = fields
        if key not in PARAMETERS:
            raise ConfigError(f"line {lineno}: unknown parameter {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate parameter {key!r}")
        if value.lower() != "xx":
            values[key] = value
    return values


def _float(values, key, default=None):
    if key not in values:
        if default is None:
            raise ConfigError(f"missing required parameter {key}")
        return default
    raw = values[key]
    if key == "maxThroughtput_" and raw.lower().endswith("mbps"):
        raw = raw[:-4]
    if raw.lower() in ("inf", "infinity", "∞"):
        return math.inf
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {values[key]!r}") from None


def _int(values, key, default=None):
    v = _float(values, key, default)
    if v != int(v):
        raise ConfigError(f"{key}: expected an integer, got {values[key]!r}")
    return int(v)


def _mbps_to_bps(mbps: float) -> float:
    return mbps if math.isinf(mbps) else round(mbps * 1e6, 6)


def parse_config(text: str) -> ParsedConfig:
    values = read_parameters(text)

    freq_random = _int(values, "freqRandom_")
    freq_dedicated = _int(values, "freqDeter_")
    unused_random = freq_random == 0
    unused_dedicated = freq_dedicated == 0
    required = [k for k in PARAMETERS if not (
        (unused_random and k in RANDOM_ONLY) or (unused_dedicated and k in DEDICATED_ONLY)
    )]
    for key in required:
        if key not in values:
            raise ConfigError(f"missing required parameter {key}")

    switch = _float(values, "switchAleaDet_")
    if not math.isinf(switch) and switch != int(switch):
        raise ConfigError("switchAleaDet_: expected an integer or inf")
    frame_duration = _float(values, "frameDuration_")
    if not frame_duration > 0:
        raise ConfigError("frameDuration_ must be > 0")
    for key in ("rtt_", "cutConnect_", "maxThroughtput_"):
        if _float(values, key) < 0:
            raise ConfigError(f"{key} must be >= 0")
    antenna = _int(values, "boolAntennaLimit_")
    if antenna not in (0, 1):
        raise ConfigError("boolAntennaLimit_ must be 0 or 1")
    counts = {}
    for key in ("nbSlotPerFreq_", "sizeSlotRandom_", "sizeSlotDeter_", "nbSlotRndFreqGroup_"):
        counts[key] = _int(values, key, 0)
        if counts[key] < 0:
            raise ConfigError(f"{key} must be >= 0")
    if freq_random < 0 or freq_dedicated < 0:
        raise ConfigError("frequency counts must be >= 0")

    try:
        frame = FrameConfig(
            frame_duration=frame_duration,
            slots_per_freq=counts["nbSlotPerFreq_"],
            freq_random=freq_random,
            freq_dedicated=freq_dedicated,
            ra_block_freqs=_float(values, "nbFreqPerRand_", 0.0) if freq_random else 0.0,
            bits_per_slot_dedicated=counts["sizeSlotDeter_"] if freq_dedicated else 0,
            bits_per_ra_allocation=counts["sizeSlotRandom_"] if freq_random else 0,
            blocks_per_pldu=counts["nbSlotRndFreqGroup_"] if freq_random else 0,
            antenna_limited=bool(antenna),
            max_throughput=_mbps_to_bps(_float(values, "maxThroughtput_")),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None
    queue = QueueSettings(
        esn0=_float(values, "esN0_"),
        switch_threshold=switch,
        cut_connect=_float(values, "cutConnect_"),
        rtt=_float(values, "rtt_"),
    )
    return ParsedConfig(frame, queue, RunDefaults())


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return repr(int(x)) if x.is_integer() else repr(x)
    return str(x)


def serialize_config(frame: FrameConfig, queue: QueueSettings) -> str:
    values = {
        "cutConnect_": queue.cut_connect,
        "esN0_": queue.esn0,
        "switchAleaDet_": float(queue.switch_threshold),
        "frameDuration_": frame.frame_duration,
        "nbSlotPerFreq_": frame.slots_per_freq,
        "sizeSlotRandom_": frame.bits_per_ra_allocation,
        "sizeSlotDeter_": frame.bits_per_slot_dedicated,
        "rtt_": queue.rtt,
        "freqRandom_": frame.freq_random,
        "nbFreqPerRand_": frame.ra_block_freqs,
        "freqDeter_": frame.freq_dedicated,
        "maxThroughtput_": frame.max_throughput / 1e6,
        "nbSlotRndFreqGroup_": frame.blocks_per_pldu,
        "boolAntennaLimit_": frame.antenna_limited,
    }
    lines = []
    for key in PARAMETERS:
        unused = (frame.freq_random == 0 and key in RANDOM_ONLY) or (
            frame.freq_dedicated == 0 and key in DEDICATED_ONLY
        )
        lines.append(f"{key} {'xx' if unused else _fmt(values[key])}")
    return "\n".join(lines) + "\n"
