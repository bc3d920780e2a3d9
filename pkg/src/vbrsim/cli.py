"""Command-line interface.

Subcommands:
  run    simulate one or more policies over a manifest + bandwidth trace
  gen    generate synthetic inputs (bandwidth traces, version ladders)
  stats  recompute statistics from an existing session log

Exit codes: 0 success, 2 configuration/validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine, metrics, model, scenarios

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _parse_policy_specs(raw: str, default_window: int):
    """Parse a comma-separated policy list: "itb", "avg", "avg:N".

    Returns a list of (label, policy_id, window_n) triples.
    """
    out = []
    for part in raw.split(","):
        token = part.strip().lower()
        if not token:
            continue
        if token == "itb":
            out.append(("ITB", "itb", default_window))
        elif token == "avg":
            out.append((f"AVG-{default_window}", "avg", default_window))
        elif token.startswith("avg:"):
            try:
                window = int(token.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad policy spec {part!r}: window must be an integer")
            out.append((f"AVG-{window}", "avg", window))
        else:
            raise ValueError(f"unknown policy {part!r} (expected itb, avg, or avg:N)")
    if not out:
        raise ValueError("no policies given")
    return out


def _client_config(args, policy_id: str, window: int) -> model.ClientConfig:
    return model.ClientConfig(
        beta_min=args.beta_min,
        beta_max=args.beta_max,
        window_n=window,
        delta=args.delta,
        theta=args.theta,
        rtt=args.rtt,
        start_version=args.start_version,
        policy=policy_id,
        uptrend_gate=args.uptrend_gate,
    )


def _warmup_count(arg: str, log: engine.SessionLog) -> int:
    if arg == "auto":
        return metrics.warmup_segments(log)
    return int(arg)


def cmd_run(args) -> int:
    manifest = model.load_manifest(args.manifest)
    trace = model.load_trace(args.bandwidth)
    specs = _parse_policy_specs(args.policy, args.window)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    stats_by_label = {}
    for label, policy_id, window in specs:
        cfg = _client_config(args, policy_id, window)
        log = engine.run_session(
            manifest, trace, cfg, trace_label=Path(args.bandwidth).stem
        )
        warmup = _warmup_count(args.warmup, log)
        stats = metrics.compute_stats(log, warmup_exclude=warmup)
        stats_by_label[label] = stats

        stem = label.lower()
        engine.save_log_jsonl(log, out_dir / f"{stem}.jsonl")
        engine.save_log_csv(log, out_dir / f"{stem}.csv")
        with open(out_dir / f"{stem}.stats.json", "w") as fh:
            json.dump(stats.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        with open(out_dir / f"{stem}.stats.txt", "w") as fh:
            fh.write(metrics.stats_table({label: stats}))
        grid = [float(g) for g in range(0, int(args.beta_max + manifest.segment_duration) + 1)]
        with open(out_dir / f"{stem}.cdf.csv", "w") as fh:
            fh.write("level_s,fraction\n")
            for level, frac in metrics.buffer_cdf(log, grid):
                fh.write(f"{level},{frac}\n")

    table = metrics.stats_table(stats_by_label)
    if len(specs) > 1:
        with open(out_dir / "comparison.txt", "w") as fh:
            fh.write(table)
    sys.stdout.write(table)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "bandwidth":
        if args.shape != "rect":
            raise ValueError(f"unknown bandwidth shape {args.shape!r} (expected rect)")
        high, low, period_high, period_low, total = args.params
        trace = scenarios.gen_rect_bandwidth(
            high * 1000.0, low * 1000.0, period_high, period_low, total
        )
        model.save_trace(trace, args.out)
    else:  # ladder
        spec = scenarios.ladder_preset(
            args.preset,
            segment_count=args.segments,
            seed=args.seed,
            burstiness=args.burstiness,
        )
        manifest = scenarios.gen_vbr_ladder(spec, title=args.preset)
        model.save_manifest(manifest, args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    log = engine.load_log_jsonl(args.log)
    warmup = _warmup_count(args.warmup, log)
    stats = metrics.compute_stats(log, warmup_exclude=warmup)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(stats.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    sys.stdout.write(metrics.stats_table({args.log: stats}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vbrsim", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a streaming session")
    run.add_argument("--manifest", required=True, help="manifest JSON file")
    run.add_argument("--bandwidth", required=True, help="bandwidth trace CSV file")
    run.add_argument(
        "--policy",
        default="avg",
        help="comma-separated policies: itb, avg, avg:N (default avg)",
    )
    run.add_argument("--window", type=int, default=30, help="moving-average length N")
    run.add_argument("--beta-min", type=float, default=10.0, dest="beta_min")
    run.add_argument("--beta-max", type=float, default=50.0, dest="beta_max")
    run.add_argument("--delta", type=float, default=0.1, help="throughput smoothing weight")
    run.add_argument("--theta", type=float, default=1.05, help="QP-model compensation factor")
    run.add_argument("--rtt", type=float, default=0.040, help="round-trip time in seconds")
    run.add_argument("--start-version", type=int, default=1, dest="start_version")
    run.add_argument(
        "--uptrend-gate",
        choices=("prose", "pseudocode"),
        default="prose",
        dest="uptrend_gate",
        help="which version's representative bitrate gates an up-switch",
    )
    run.add_argument(
        "--warmup",
        default="0",
        help="segments to exclude from stats: an integer or 'auto' (first buffer fill)",
    )
    run.add_argument("--out", required=True, help="output directory")
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="generate synthetic inputs")
    gen_sub = gen.add_subparsers(dest="kind", required=True)

    gen_bw = gen_sub.add_parser("bandwidth", help="generate a bandwidth trace")
    gen_bw.add_argument("shape", help="trace shape (rect)")
    gen_bw.add_argument(
        "params",
        type=float,
        nargs=5,
        metavar="P",
        help="rect: HIGH_KBPS LOW_KBPS PERIOD_HIGH_S PERIOD_LOW_S TOTAL_S",
    )
    gen_bw.add_argument("--out", required=True, help="output CSV file")
    gen_bw.set_defaults(func=cmd_gen)

    gen_ladder = gen_sub.add_parser("ladder", help="generate a VBR version ladder")
    gen_ladder.add_argument(
        "--preset", required=True, choices=sorted(scenarios.LADDER_PRESETS)
    )
    gen_ladder.add_argument("--segments", type=int, default=300)
    gen_ladder.add_argument("--seed", type=int, default=0)
    gen_ladder.add_argument("--burstiness", type=float, default=0.3)
    gen_ladder.add_argument("--out", required=True, help="output JSON file")
    gen_ladder.set_defaults(func=cmd_gen)

    stats = sub.add_parser("stats", help="recompute stats from a session log")
    stats.add_argument("--log", required=True, help="session log (JSONL)")
    stats.add_argument("--warmup", default="0", help="segments to exclude, or 'auto'")
    stats.add_argument("--out", help="optional stats JSON output path")
    stats.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
