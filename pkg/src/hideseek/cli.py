"""Command-line interface.

    hideseek simulate --config sim.json --out data/
    hideseek run --config eval.json --out results/ [--workers N]
    hideseek score --report results/
    hideseek leaderboard --report results/ [--format json|md]

Config files are JSON documents mirroring the SimConfig / EvalConfig fields;
see README.md for worked examples.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from hideseek.io import save_dataset
from hideseek.orchestrator import load_config, rescore_report, run_protocol
from hideseek.simulate import SimConfig, simulate_dataset


def _cmd_simulate(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = SimConfig(**json.load(fh))
    dataset = simulate_dataset(cfg)
    save_dataset(dataset, args.out)
    print(f"wrote {len(dataset)} records to {args.out}")
    return 0


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    report = run_protocol(cfg, args.out, workers=args.workers)
    print(f"wrote report and leaderboards to {args.out}")
    _print_boards(json.loads(report.leaderboard_text))
    failed = [n for n, info in {**report.hiders, **report.seekers}.items()
              if info.get("status") == "failed"]
    if failed:
        print(f"failed algorithms: {', '.join(sorted(failed))}")
    return 0


def _cmd_score(args) -> int:
    recomputed = rescore_report(args.report)
    stored_path = Path(args.report) / "leaderboard.json"
    stored = stored_path.read_text(encoding="utf-8") if stored_path.is_file() else None
    if stored is not None and stored != recomputed:
        print("MISMATCH: stored leaderboard.json differs from recomputed scores",
              file=sys.stderr)
        return 1
    stored_path.write_text(recomputed, encoding="utf-8")
    print("leaderboard.json reproduced from stored predictions")
    _print_boards(json.loads(recomputed))
    return 0


def _format_md(obj: dict) -> str:
    lines = ["## Seekers (higher is better)", "", "| rank | name | score |", "|---|---|---|"]
    for e in obj["seekers"]:
        lines.append(f"| {e['rank']} | {e['name']} | {e['score']:.6f} |")
    lines += ["", "## Hiders (lower is better)", "", "| rank | name | score |", "|---|---|---|"]
    for e in obj["hiders"]:
        lines.append(f"| {e['rank']} | {e['name']} | {e['score']:.6f} |")
    if obj.get("disqualified"):
        lines += ["", "Disqualified: " + ", ".join(obj["disqualified"])]
    return "\n".join(lines)


def _print_boards(obj: dict) -> None:
    print(_format_md(obj))


def _cmd_leaderboard(args) -> int:
    path = Path(args.report) / "leaderboard.json"
    text = path.read_text(encoding="utf-8")
    if args.format == "json":
        print(text, end="")
    else:
        print(_format_md(json.loads(text)))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="hideseek", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated dataset directory")
    p.add_argument("--config", required=True, help="SimConfig JSON file")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("run", help="run the full evaluation protocol")
    p.add_argument("--config", required=True, help="EvalConfig JSON file")
    p.add_argument("--out", required=True, help="output report directory")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("score", help="recompute leaderboards from stored predictions")
    p.add_argument("--report", required=True, help="report directory from a run")
    p.set_defaults(fn=_cmd_score)

    p = sub.add_parser("leaderboard", help="render the leaderboards")
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.set_defaults(fn=_cmd_leaderboard)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
