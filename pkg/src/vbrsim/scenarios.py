"""Synthetic inputs: rectangular bandwidth traces and VBR version ladders.

Ladders are built model-consistently: the top version gets a seeded bursty
per-segment bitrate shape, lower versions follow the QP bitrate model exactly,
and (by default) every version is rescaled so its empirical mean hits its
target average. Optional multiplicative "model error" noise breaks the exact
QP relationship the way real encoders do.

A ``burstiness`` of zero requests a degenerate constant-bitrate ladder: every
segment sits exactly at the version's target average and no noise of any kind
is applied.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .model import BandwidthTrace, VersionInfo, VideoManifest

# Extra multiplier applied to one segment per burst period, mimicking the
# bitrate spikes that scene changes produce.
BURST_FACTOR = 2.0


@dataclass(frozen=True)
class LadderSpec:
    num_versions: int
    qps: tuple
    target_avg_bitrates: tuple  # bits/s, ascending with version index
    segment_count: int
    segment_duration: float
    burstiness: float  # coefficient of variation of per-segment bitrate
    burst_period: int  # segments between scene-change bursts
    seed: int
    model_error: float = 0.05  # cv of noise applied off the exact QP model

    def __post_init__(self):
        object.__setattr__(self, "qps", tuple(self.qps))
        object.__setattr__(self, "target_avg_bitrates", tuple(self.target_avg_bitrates))
        if self.num_versions < 2:
            raise ValueError(f"num_versions must be >= 2, got {self.num_versions}")
        if len(self.qps) != self.num_versions:
            raise ValueError(f"expected {self.num_versions} qps, got {len(self.qps)}")
        if len(self.target_avg_bitrates) != self.num_versions:
            raise ValueError(
                f"expected {self.num_versions} target bitrates, got {len(self.target_avg_bitrates)}"
            )
        if any(hi >= lo for lo, hi in zip(self.qps, self.qps[1:])):
            raise ValueError(f"qps must strictly decrease with version index, got {self.qps}")
        if any(b <= a for a, b in zip(self.target_avg_bitrates, self.target_avg_bitrates[1:])):
            raise ValueError("target bitrates must strictly increase with version index")
        if any(b <= 0 for b in self.target_avg_bitrates):
            raise ValueError("target bitrates must be > 0")
        if self.segment_count < 1:
            raise ValueError(f"segment_count must be >= 1, got {self.segment_count}")
        if self.segment_duration <= 0:
            raise ValueError(f"segment_duration must be > 0, got {self.segment_duration}")
        if self.burstiness < 0:
            raise ValueError(f"burstiness must be >= 0, got {self.burstiness}")
        if self.burst_period < 1:
            raise ValueError(f"burst_period must be >= 1, got {self.burst_period}")
        if self.model_error < 0:
            raise ValueError(f"model_error must be >= 0, got {self.model_error}")


# Version ladders of the two test videos this project mirrors: six versions,
# QP 48 down to 22, with measured average bitrates in bits/s.
LADDER_PRESETS = {
    "sony-like": LadderSpec(
        num_versions=6,
        qps=(48, 42, 38, 34, 28, 22),
        target_avg_bitrates=(203_770, 390_750, 602_960, 991_320, 2_194_050, 5_180_580),
        segment_count=300,
        segment_duration=2.0,
        burstiness=0.3,
        burst_period=25,
        seed=0,
    ),
    "terminator-like": LadderSpec(
        num_versions=6,
        qps=(48, 42, 38, 34, 28, 22),
        target_avg_bitrates=(201_550, 377_970, 567_020, 882_290, 1_798_930, 4_127_860),
        segment_count=300,
        segment_duration=2.0,
        burstiness=0.3,
        burst_period=25,
        seed=0,
    ),
}


def ladder_preset(name: str, **overrides) -> LadderSpec:
    """A named preset, optionally with fields overridden."""
    if name not in LADDER_PRESETS:
        raise ValueError(f"unknown preset {name!r}, expected one of {sorted(LADDER_PRESETS)}")
    base = LADDER_PRESETS[name]
    if not overrides:
        return base
    values = {f: getattr(base, f) for f in base.__dataclass_fields__}
    values.update(overrides)
    return LadderSpec(**values)


def gen_rect_bandwidth(
    high: float, low: float, period_high: float, period_low: float, total: float
) -> BandwidthTrace:
    """Alternating high/low piecewise-constant trace, starting high at t=0."""
    for name, val in (
        ("high", high),
        ("low", low),
        ("period_high", period_high),
        ("period_low", period_low),
        ("total", total),
    ):
        if val <= 0:
            raise ValueError(f"{name} must be > 0, got {val}")
    breakpoints = []
    t = 0.0
    is_high = True
    while t < total:
        breakpoints.append((t, high if is_high else low))
        t += period_high if is_high else period_low
        is_high = not is_high
    return BandwidthTrace(tuple(breakpoints))


def _lognormal_shape(rng: random.Random, cv: float) -> float:
    # unit-mean log-normal with the requested coefficient of variation
    sigma2 = math.log(1.0 + cv * cv)
    return rng.lognormvariate(-sigma2 / 2.0, math.sqrt(sigma2))


def gen_vbr_ladder(
    spec: LadderSpec,
    title: str = "synthetic",
    rescale: bool = True,
    quantize: bool = True,
) -> VideoManifest:
    """Generate a manifest from a ladder spec (deterministic for a seed).

    ``rescale=False`` keeps the raw QP-model ladder instead of forcing each
    version's empirical mean onto its target; ``quantize=False`` keeps exact
    float sizes instead of integer bits. Both are mainly for analyzing the
    generator itself.
    """
    rng = random.Random(spec.seed)
    n = spec.segment_count
    top = spec.num_versions - 1
    top_qp = spec.qps[top]

    if spec.burstiness == 0:
        bitrates = [[spec.target_avg_bitrates[k]] * n for k in range(spec.num_versions)]
    else:
        shapes = [_lognormal_shape(rng, spec.burstiness) for _ in range(n)]
        for i in range(0, n, spec.burst_period):
            shapes[i] *= BURST_FACTOR
        top_target = spec.target_avg_bitrates[top]
        bitrates = []
        for k in range(spec.num_versions):
            ratio = 2.0 ** ((top_qp - spec.qps[k]) / 6)
            row = [top_target * s * ratio for s in shapes]
            if spec.model_error > 0 and k != top:
                row = [b * _lognormal_shape(rng, spec.model_error) for b in row]
            bitrates.append(row)
        if rescale:
            for k in range(spec.num_versions):
                scale = spec.target_avg_bitrates[k] / (sum(bitrates[k]) / n)
                bitrates[k] = [b * scale for b in bitrates[k]]

    versions = []
    for k in range(spec.num_versions):
        sizes = [b * spec.segment_duration for b in bitrates[k]]
        if quantize:
            sizes = [max(1, round(s)) for s in sizes]
        versions.append(
            VersionInfo(index=k + 1, qp=spec.qps[k], segment_sizes=tuple(sizes))
        )
    return VideoManifest(
        title=title, segment_duration=spec.segment_duration, versions=tuple(versions)
    )
