#!/usr/bin/env python3
"""Generate a synthetic smart-home device log for trying out the CLI.

Writes a timestamped sensor/actuator log covering the three built-in daily
activities, ready to feed into `tempoguard ingest`.
"""

from __future__ import annotations

import argparse
import sys

from tempoguard import ingest, simulate


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")
    parser.add_argument(
        "--instances", type=int, default=50, help="runs per activity (default 50)"
    )
    parser.add_argument(
        "--noise", type=float, default=0.10, help="interval jitter sigma as a fraction"
    )
    parser.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    args = parser.parse_args(argv)

    specs = simulate.builtin_specs(args.noise)
    cfg = simulate.SimConfig(seed=args.seed, instances_per_activity=args.instances)
    events = simulate.generate(specs, cfg)
    text = ingest.serialize_log(events, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(events)} events to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
