"""Deterministic per-segment download and playback simulator.

The client requests segments back to back. Each download transfers one
segment across the piecewise-constant bandwidth trace (one RTT up front),
playback drains the buffer at one second of media per wall-clock second once
the first segment has completed, and each completed segment adds one segment
duration of media. When the buffer exceeds ``beta_max`` after a completion,
the client idles (playback keeps draining) until the buffer is back at
``beta_max`` before issuing the next request, so the buffer never exceeds
``beta_max`` plus one segment duration.

The policy is consulted once per completed segment. Stall time (playback
paused on an empty buffer mid-download) is accounted per segment and never
dropped silently.
"""

from __future__ import annotations

import csv
import json
from bisect import bisect_right
from dataclasses import asdict, dataclass
from types import MappingProxyType

from . import policies
from .estimators import EstimatorState
from .model import BandwidthTrace, ClientConfig, ClientView, VideoManifest


@dataclass(frozen=True)
class SegmentRecord:
    index: int
    version_requested: int
    size_bits: float
    request_time: float
    completion_time: float
    instant_throughput: float
    buffer_before: float
    buffer_after: float
    case_label: str
    stall_time: float


@dataclass(frozen=True)
class SessionLog:
    """Per-segment records plus the inputs needed to interpret them."""

    records: tuple
    config: ClientConfig
    manifest_title: str
    trace_label: str
    segment_duration: float
    num_versions: int
    playback_start: float
    total_stall: float


def download_time(trace: BandwidthTrace, start: float, size: float, rtt: float = 0.0) -> float:
    """Wall-clock time to fetch ``size`` bits starting at ``start``.

    One RTT elapses before the first bit arrives, then the transfer proceeds
    at the trace's bandwidth, integrated exactly across pieces. The returned
    duration includes the RTT.
    """
    if size <= 0:
        raise ValueError(f"size must be > 0, got {size}")
    if start < 0:
        raise ValueError(f"start must be >= 0, got {start}")
    if rtt < 0:
        raise ValueError(f"rtt must be >= 0, got {rtt}")
    t = start + rtt
    starts = trace.starts
    breakpoints = trace.breakpoints
    piece = bisect_right(starts, t) - 1
    remaining = size
    while True:
        bw = breakpoints[piece][1]
        finish = t + remaining / bw
        if piece + 1 >= len(breakpoints) or finish <= starts[piece + 1]:
            return finish - start
        piece_end = starts[piece + 1]
        remaining = max(remaining - bw * (piece_end - t), 0.0)
        t = piece_end
        piece += 1


def run_session(
    manifest: VideoManifest,
    trace: BandwidthTrace,
    cfg: ClientConfig,
    policy=None,
    trace_label: str = "",
) -> SessionLog:
    """Simulate a full streaming session and return its log.

    ``policy`` may be a callable ``(view, est, cfg) -> Decision``; by default
    the policy named in ``cfg.policy`` is used.
    """
    if not 1 <= cfg.start_version <= manifest.num_versions:
        raise ValueError(
            f"start_version {cfg.start_version} out of range 1..{manifest.num_versions}"
        )
    decide = policy if policy is not None else policies.decide
    qps = manifest.qps
    duration = manifest.segment_duration
    est = EstimatorState(manifest.num_versions, cfg.window_n)

    clock = 0.0
    buffer = 0.0
    playing = False
    playback_start = 0.0
    version = cfg.start_version
    received_sizes: dict = {}
    throughput_history: list = []
    records = []

    for index in range(manifest.num_segments):
        if buffer > cfg.beta_max:
            # idle until the buffer has played down to the target level
            clock += buffer - cfg.beta_max
            buffer = cfg.beta_max

        size = manifest.segment_size(version, index)
        completion = clock + download_time(trace, clock, size, cfg.rtt)
        elapsed = completion - clock

        buffer_before = buffer
        if playing:
            stall = max(0.0, elapsed - buffer)
            buffer = max(buffer - elapsed, 0.0)
        else:
            stall = 0.0
        buffer += duration
        if not playing:
            playing = True
            playback_start = completion

        t_instant = size / elapsed
        received_sizes[index] = size
        throughput_history.append(t_instant)
        est.ingest_segment(index, version, size / duration, qps, cfg.theta)
        est.update_smoothed_throughput(t_instant, cfg.delta)

        view = ClientView(
            buffer_level=buffer,
            last_segment_index=index,
            last_version=version,
            received_sizes=MappingProxyType(received_sizes),
            qps=qps,
            throughput_history=tuple(throughput_history),
        )
        decision = decide(view, est, cfg)

        records.append(
            SegmentRecord(
                index=index,
                version_requested=version,
                size_bits=size,
                request_time=clock,
                completion_time=completion,
                instant_throughput=t_instant,
                buffer_before=buffer_before,
                buffer_after=buffer,
                case_label=decision.case_label,
                stall_time=stall,
            )
        )
        version = decision.next_version
        clock = completion

    return SessionLog(
        records=tuple(records),
        config=cfg,
        manifest_title=manifest.title,
        trace_label=trace_label,
        segment_duration=duration,
        num_versions=manifest.num_versions,
        playback_start=playback_start,
        total_stall=sum(r.stall_time for r in records),
    )


# ---------------------------------------------------------------------------
# Serialization: JSON lines (header line, then one record per line) and CSV.
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "index",
    "version",
    "size_bits",
    "request_time_s",
    "completion_time_s",
    "throughput_bps",
    "buffer_before_s",
    "buffer_after_s",
    "case",
    "stall_s",
)


def log_to_jsonl(log: SessionLog) -> str:
    header = {
        "manifest_title": log.manifest_title,
        "trace_label": log.trace_label,
        "segment_duration_s": log.segment_duration,
        "num_versions": log.num_versions,
        "playback_start_s": log.playback_start,
        "total_stall_s": log.total_stall,
        "config": log.config.as_dict(),
    }
    lines = [json.dumps(header, sort_keys=True)]
    for rec in log.records:
        lines.append(json.dumps(asdict(rec), sort_keys=True))
    return "\n".join(lines) + "\n"


def save_log_jsonl(log: SessionLog, path) -> None:
    with open(path, "w") as fh:
        fh.write(log_to_jsonl(log))


def load_log_jsonl(path) -> SessionLog:
    with open(path) as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty log file")
    try:
        header = json.loads(lines[0])
        records = tuple(SegmentRecord(**json.loads(line)) for line in lines[1:])
    except (json.JSONDecodeError, TypeError) as exc:
        raise ValueError(f"{path}: malformed log ({exc})") from exc
    return SessionLog(
        records=records,
        config=ClientConfig(**header["config"]),
        manifest_title=header["manifest_title"],
        trace_label=header["trace_label"],
        segment_duration=header["segment_duration_s"],
        num_versions=header["num_versions"],
        playback_start=header["playback_start_s"],
        total_stall=header["total_stall_s"],
    )


def save_log_csv(log: SessionLog, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in log.records:
            writer.writerow(
                [
                    r.index,
                    r.version_requested,
                    r.size_bits,
                    r.request_time,
                    r.completion_time,
                    r.instant_throughput,
                    r.buffer_before,
                    r.buffer_after,
                    r.case_label,
                    r.stall_time,
                ]
            )
