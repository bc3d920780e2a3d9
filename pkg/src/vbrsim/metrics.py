"""Session statistics and buffer-level distribution.

Switch-degree statistics are taken over ALL consecutive version transitions,
zero-degree transitions included, with the population standard deviation.
Buffer statistics use the per-segment buffer level sampled after each
completion (buffer_after), not a time-weighted integral.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, fields
from statistics import fmean, pstdev

from .engine import SessionLog


@dataclass(frozen=True)
class SessionStats:
    average_bitrate: float
    average_version: float
    max_version: int
    min_version: int
    num_switches: int
    max_switch_degree: int
    std_switch_degrees: float
    min_buffer: float
    std_buffer: float
    total_stall: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def compute_stats(log: SessionLog, warmup_exclude: int = 0) -> SessionStats:
    """Summarize a session, optionally dropping the first segments."""
    if not log.records:
        raise ValueError("empty session log")
    if warmup_exclude < 0:
        raise ValueError(f"warmup_exclude must be >= 0, got {warmup_exclude}")
    if warmup_exclude >= len(log.records):
        raise ValueError(
            f"warmup_exclude {warmup_exclude} >= record count {len(log.records)}"
        )
    records = log.records[warmup_exclude:]
    versions = [r.version_requested for r in records]
    bitrates = [r.size_bits / log.segment_duration for r in records]
    buffers = [r.buffer_after for r in records]
    degrees = [abs(b - a) for a, b in zip(versions, versions[1:])]
    return SessionStats(
        average_bitrate=fmean(bitrates),
        average_version=fmean(versions),
        max_version=max(versions),
        min_version=min(versions),
        num_switches=sum(1 for d in degrees if d > 0),
        max_switch_degree=max(degrees, default=0),
        std_switch_degrees=pstdev(degrees) if degrees else 0.0,
        min_buffer=min(buffers),
        std_buffer=pstdev(buffers) if len(buffers) > 1 else 0.0,
        total_stall=sum(r.stall_time for r in records),
    )


def buffer_cdf(log: SessionLog, grid) -> list:
    """Empirical CDF of buffer_after, evaluated at each grid level."""
    if not log.records:
        raise ValueError("empty session log")
    grid = list(grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted ascending")
    samples = sorted(r.buffer_after for r in log.records)
    n = len(samples)
    return [(level, bisect_right(samples, level) / n) for level in grid]


def warmup_segments(log: SessionLog) -> int:
    """Number of leading segments before the buffer first reaches its target.

    Returns 0 when the buffer never fills, so stats fall back to the whole
    session.
    """
    for i, rec in enumerate(log.records):
        if rec.buffer_after >= log.config.beta_max:
            return i + 1
    return 0


# Row labels for the human-readable table; values are (label, formatter).
_TABLE_ROWS = (
    ("Average bitrate (kbps)", lambda s: f"{s.average_bitrate / 1000.0:.1f}"),
    ("Average version", lambda s: f"{s.average_version:.2f}"),
    ("Maximum version", lambda s: f"{s.max_version}"),
    ("Minimum version", lambda s: f"{s.min_version}"),
    ("Number of switches", lambda s: f"{s.num_switches}"),
    ("Maximum switch degree", lambda s: f"{s.max_switch_degree}"),
    ("STD of switch degrees", lambda s: f"{s.std_switch_degrees:.2f}"),
    ("Minimum buffer level (s)", lambda s: f"{s.min_buffer:.1f}"),
    ("STD of buffer levels (s)", lambda s: f"{s.std_buffer:.2f}"),
    ("Total stall (s)", lambda s: f"{s.total_stall:.2f}"),
)


def stats_table(stats_by_label: dict) -> str:
    """Aligned text table; one column per (policy) label."""
    if not stats_by_label:
        raise ValueError("no stats to tabulate")
    labels = list(stats_by_label)
    header = ["Statistics"] + labels
    rows = [header]
    for name, fmt in _TABLE_ROWS:
        rows.append([name] + [fmt(stats_by_label[lab]) for lab in labels])
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    out = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [cell.rjust(widths[i + 1]) for i, cell in enumerate(row[1:])]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"
