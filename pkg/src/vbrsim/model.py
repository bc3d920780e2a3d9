"""Core data model: version ladders, bandwidth traces, client configuration.

All types are immutable value objects, validated at construction. Segment
sizes are kept in bits throughout so that bitrate is simply size divided by
segment duration; the manifest file format may declare sizes in bytes, in
which case ingestion converts once.
"""

from __future__ import annotations

import csv
import json
from bisect import bisect_right
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping


class StateError(RuntimeError):
    """Raised when an operation is applied to state in the wrong order."""


@dataclass(frozen=True)
class VersionInfo:
    """One encoded version of the video.

    Higher ``index`` means higher quality (and therefore lower ``qp``).
    ``segment_sizes`` holds one size in bits per segment.
    """

    index: int
    qp: int
    segment_sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "segment_sizes", tuple(self.segment_sizes))
        if self.index < 1:
            raise ValueError(f"version index must be >= 1, got {self.index}")
        if not self.segment_sizes:
            raise ValueError(f"version {self.index} has no segments")
        for i, size in enumerate(self.segment_sizes):
            if size <= 0:
                raise ValueError(
                    f"version {self.index} segment {i}: size must be > 0, got {size}"
                )


@dataclass(frozen=True)
class VideoManifest:
    """The full version ladder plus segment timing for one video."""

    title: str
    segment_duration: float
    versions: tuple

    def __post_init__(self):
        object.__setattr__(self, "versions", tuple(self.versions))
        if self.segment_duration <= 0:
            raise ValueError(f"segment_duration must be > 0, got {self.segment_duration}")
        if len(self.versions) < 2:
            raise ValueError("manifest needs at least 2 versions")
        for pos, v in enumerate(self.versions, start=1):
            if v.index != pos:
                raise ValueError(
                    f"versions must be sorted with contiguous indices 1..V; "
                    f"position {pos} has index {v.index}"
                )
        counts = {len(v.segment_sizes) for v in self.versions}
        if len(counts) != 1:
            raise ValueError(f"all versions must have the same segment count, got {counts}")
        for lo, hi in zip(self.versions, self.versions[1:]):
            if lo.qp <= hi.qp:
                raise ValueError(
                    f"qp must strictly decrease with version index "
                    f"(version {lo.index} qp={lo.qp}, version {hi.index} qp={hi.qp})"
                )

    @property
    def num_versions(self) -> int:
        return len(self.versions)

    @property
    def num_segments(self) -> int:
        return len(self.versions[0].segment_sizes)

    @property
    def qps(self) -> tuple:
        return tuple(v.qp for v in self.versions)

    def segment_size(self, version: int, index: int):
        """Size in bits of segment ``index`` at ``version`` (1-based version)."""
        if not 1 <= version <= self.num_versions:
            raise ValueError(f"version {version} out of range 1..{self.num_versions}")
        if not 0 <= index < self.num_segments:
            raise ValueError(f"segment index {index} out of range 0..{self.num_segments - 1}")
        return self.versions[version - 1].segment_sizes[index]


def segment_bitrate(manifest: VideoManifest, version: int, index: int) -> float:
    """Per-segment bitrate in bits/second: size divided by segment duration."""
    return manifest.segment_size(version, index) / manifest.segment_duration


@dataclass(frozen=True)
class BandwidthTrace:
    """Piecewise-constant available bandwidth.

    ``breakpoints`` is a sequence of (start_time_s, bandwidth_bps) pairs with
    strictly increasing start times beginning at 0. The last piece extends
    forever, so a session can always finish.
    """

    breakpoints: tuple

    def __post_init__(self):
        bps = tuple((float(t), float(bw)) for t, bw in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps:
            raise ValueError("trace needs at least one breakpoint")
        if bps[0][0] != 0.0:
            raise ValueError(f"first breakpoint must start at t=0, got {bps[0][0]}")
        for (t0, _), (t1, _) in zip(bps, bps[1:]):
            if t1 <= t0:
                raise ValueError(f"breakpoint times must strictly increase ({t0} then {t1})")
        for t, bw in bps:
            if bw <= 0:
                raise ValueError(f"bandwidth must be > 0, got {bw} at t={t}")

    @property
    def starts(self) -> tuple:
        return tuple(t for t, _ in self.breakpoints)


def bandwidth_at(trace: BandwidthTrace, t: float) -> float:
    """Bandwidth in effect at time ``t`` (right-continuous lookup)."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    idx = bisect_right(trace.starts, t) - 1
    return trace.breakpoints[idx][1]


_POLICIES = ("avg", "itb")
_UPTREND_GATES = ("prose", "pseudocode")


@dataclass(frozen=True)
class ClientConfig:
    """Client-side adaptation parameters.

    ``beta_min``/``beta_max`` bound the buffer regimes in seconds, ``window_n``
    is the moving-average length for representative bitrates, ``delta`` the
    throughput smoothing weight, and ``theta`` the compensation factor applied
    when translating a measured bitrate to another version via the QP model.
    ``uptrend_gate`` selects which version's representative bitrate gates an
    up-switch: "prose" checks the next-higher version (default), "pseudocode"
    checks the current one.
    """

    beta_min: float = 10.0
    beta_max: float = 50.0
    window_n: int = 30
    delta: float = 0.1
    theta: float = 1.05
    rtt: float = 0.040
    start_version: int = 1
    policy: str = "avg"
    uptrend_gate: str = "prose"

    def __post_init__(self):
        if not 0 < self.beta_min < self.beta_max:
            raise ValueError(
                f"need 0 < beta_min < beta_max, got ({self.beta_min}, {self.beta_max})"
            )
        if self.window_n < 1:
            raise ValueError(f"window_n must be >= 1, got {self.window_n}")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must be in (0, 1], got {self.delta}")
        if self.theta <= 0:
            raise ValueError(f"theta must be > 0, got {self.theta}")
        if self.rtt < 0:
            raise ValueError(f"rtt must be >= 0, got {self.rtt}")
        if self.start_version < 1:
            raise ValueError(f"start_version must be >= 1, got {self.start_version}")
        if self.policy not in _POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}, expected one of {_POLICIES}")
        if self.uptrend_gate not in _UPTREND_GATES:
            raise ValueError(
                f"unknown uptrend_gate {self.uptrend_gate!r}, expected one of {_UPTREND_GATES}"
            )

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ClientView:
    """What a policy is allowed to observe.

    This is the information barrier: policies see only the buffer level, the
    QP metadata, and measurements of segments actually received. Ground-truth
    sizes of versions never downloaded are not reachable from here.
    """

    buffer_level: float
    last_segment_index: int
    last_version: int
    received_sizes: Mapping
    qps: tuple
    throughput_history: tuple

    def __post_init__(self):
        if self.buffer_level < 0:
            raise ValueError(f"buffer_level must be >= 0, got {self.buffer_level}")


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------
#
# Manifest (JSON):
#   { "title": str, "segment_duration_s": number, "size_unit": "bits"|"bytes",
#     "versions": [ { "index": int, "qp": int, "segment_sizes": [int, ...] } ] }
#
# Bandwidth trace (CSV): header "time_s,bandwidth_kbps", one row per
# breakpoint; kbps means 1000 bit/s.


def _require(mapping, key, where):
    if key not in mapping:
        raise ValueError(f"{where}: missing field {key!r}")
    return mapping[key]


def manifest_from_dict(data: dict, where: str = "manifest") -> VideoManifest:
    title = _require(data, "title", where)
    duration = _require(data, "segment_duration_s", where)
    unit = _require(data, "size_unit", where)
    if unit not in ("bits", "bytes"):
        raise ValueError(f"{where}: size_unit must be 'bits' or 'bytes', got {unit!r}")
    scale = 8 if unit == "bytes" else 1
    raw_versions = _require(data, "versions", where)
    versions = []
    for i, v in enumerate(raw_versions):
        sizes = _require(v, "segment_sizes", f"{where}: versions[{i}]")
        if scale != 1:
            sizes = [s * scale for s in sizes]
        versions.append(
            VersionInfo(
                index=_require(v, "index", f"{where}: versions[{i}]"),
                qp=_require(v, "qp", f"{where}: versions[{i}]"),
                segment_sizes=tuple(sizes),
            )
        )
    return VideoManifest(title=title, segment_duration=duration, versions=tuple(versions))


def manifest_to_dict(manifest: VideoManifest) -> dict:
    return {
        "title": manifest.title,
        "segment_duration_s": manifest.segment_duration,
        "size_unit": "bits",
        "versions": [
            {"index": v.index, "qp": v.qp, "segment_sizes": list(v.segment_sizes)}
            for v in manifest.versions
        ],
    }


def load_manifest(path) -> VideoManifest:
    path = Path(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return manifest_from_dict(data, where=str(path))


def save_manifest(manifest: VideoManifest, path) -> None:
    with open(path, "w") as fh:
        json.dump(manifest_to_dict(manifest), fh, indent=2)
        fh.write("\n")


def load_trace(path) -> BandwidthTrace:
    path = Path(path)
    breakpoints = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["time_s", "bandwidth_kbps"]:
            raise ValueError(f"{path}: expected header 'time_s,bandwidth_kbps', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 2 columns, got {len(row)}")
            try:
                t, kbps = float(row[0]), float(row[1])
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from exc
            breakpoints.append((t, kbps * 1000.0))
    if not breakpoints:
        raise ValueError(f"{path}: trace has no breakpoints")
    return BandwidthTrace(tuple(breakpoints))


def save_trace(trace: BandwidthTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s", "bandwidth_kbps"])
        for t, bw in trace.breakpoints:
            writer.writerow([t, bw / 1000.0])
