"""Command-line entry points: run, aggregate, stats, gen-stub.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import glob
import sys
from pathlib import Path

from .errors import BadConfig, ConfigError, LatentEvoError
from .harness import RunConfig, RunReport, aggregate_reports, diversity_csv, \
    run_alignment

STUB_SOURCE = '''\
#!/usr/bin/env python3
"""Test generator child: latent container on stdin, binary PPM on stdout.

Modes other than "ok" deliberately misbehave so protocol handling can be
exercised: "truncate" emits half the image, "garbage" corrupts the header,
"fail" exits nonzero without output.
"""
import argparse
import math
import struct
import sys


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--width", type=int, default=8)
    parser.add_argument("--height", type=int, default=8)
    parser.add_argument("--mode", default="ok",
                        choices=["ok", "truncate", "garbage", "fail"])
    args = parser.parse_args()

    data = sys.stdin.buffer.read()
    header = struct.Struct("<4sHIII")
    if len(data) < header.size:
        sys.exit(4)
    magic, version, c, h, w = header.unpack_from(data)
    if magic != b"LEVO" or version != 1:
        sys.exit(4)
    d = c * h * w
    if len(data) != header.size + 8 * d:
        sys.exit(4)
    values = struct.unpack_from("<%dd" % d, data, header.size)

    if args.mode == "fail":
        sys.exit(3)

    pixels = bytearray()
    for i in range(args.width * args.height * 3):
        v = max(-30.0, min(30.0, values[i % d]))
        pixels.append(int(round(255.0 / (1.0 + math.exp(-v)))))
    out = b"P6\\n%d %d\\n255\\n" % (args.width, args.height) + bytes(pixels)
    if args.mode == "truncate":
        out = out[:len(out) // 2]
    elif args.mode == "garbage":
        out = b"NOTAPPM" + out[2:]
    sys.stdout.buffer.write(out)


if __name__ == "__main__":
    main()
'''


def _cmd_run(args) -> int:
    config = RunConfig.load(args.config)
    overrides = {}
    if args.algo is not None:
        overrides["algorithm"] = args.algo
    if args.space is not None:
        overrides["solution_space"] = args.space
    if args.pop is not None:
        overrides["population"] = args.pop
    if args.batch is not None:
        overrides["batch"] = args.batch
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.seed is not None:
        overrides["seeds"] = [args.seed]
    if args.out is not None:
        overrides["output_dir"] = args.out
    if overrides:
        merged = config.to_dict()
        merged.update(overrides)
        config = RunConfig.from_dict(merged)
    report = run_alignment(config)
    agg = report.aggregate
    print(f"{config.algorithm}/{config.solution_space}: "
          f"best {agg['best_sample_mean']:.6g} "
          f"+/- {agg['best_sample_std']:.6g} over {agg['runs']} seed(s); "
          f"evaluations/run: "
          f"{report.runs[0].ledger['reward_evaluations']}")
    if config.output_dir:
        print(f"report written to {Path(config.output_dir) / 'report.json'}")
    return 0


def _cmd_aggregate(args) -> int:
    paths: list[str] = []
    for pattern in args.reports:
        paths.extend(sorted(glob.glob(pattern)))
    if not paths:
        raise ConfigError(f"no report files match {args.reports}")
    reports = [RunReport.load(p) for p in paths]
    summary = aggregate_reports(reports)
    print(summary.to_text(), end="")
    if args.out:
        Path(args.out).write_text(summary.to_csv())
        print(f"CSV written to {args.out}")
    return 0


def _cmd_stats(args) -> int:
    report = RunReport.load(args.report)
    text = diversity_csv(report)
    if args.out:
        Path(args.out).write_text(text)
        print(f"CSV written to {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_gen_stub(args) -> int:
    path = Path(args.out)
    path.write_text(STUB_SOURCE)
    path.chmod(0o755)
    print(f"stub generator written to {path}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latent-evo",
        description="Black-box latent-noise search over a pluggable "
                    "generator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a configured run")
    run.add_argument("config", help="path to a JSON run config")
    run.add_argument("--seed", type=int, help="replace the seed list")
    run.add_argument("--steps", type=int)
    run.add_argument("--algo", choices=["cosyne", "snes", "pgpe",
                                        "best_of_n", "zero_order"])
    run.add_argument("--space", choices=["direct", "transform"])
    run.add_argument("--pop", type=int)
    run.add_argument("--batch", type=int)
    run.add_argument("--out", help="output directory override")
    run.set_defaults(func=_cmd_run)

    agg = sub.add_parser("aggregate", help="summarize report files")
    agg.add_argument("reports", nargs="+", help="report paths or globs")
    agg.add_argument("--out", help="also write the summary CSV here")
    agg.set_defaults(func=_cmd_aggregate)

    stats = sub.add_parser("stats", help="per-step diversity curve as CSV")
    stats.add_argument("report", help="path to a report.json")
    stats.add_argument("--out", help="write the CSV here instead of stdout")
    stats.set_defaults(func=_cmd_stats)

    stub = sub.add_parser("gen-stub",
                          help="write the subprocess-generator test stub")
    stub.add_argument("--out", default="gen_stub.py")
    stub.set_defaults(func=_cmd_gen_stub)
    return parser


def cli_main(argv=None) -> int:
    """Entry point returning an exit code instead of raising."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, BadConfig) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LatentEvoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
