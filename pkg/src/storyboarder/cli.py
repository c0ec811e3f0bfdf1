"""Command line front end.

    storyboarder distill app.app -o app.storyboard.json [--metrics ...]
    storyboarder oracle app.app
    storyboarder compare before.atg after.atg
    storyboarder rollup *.storyboard.json -o summary.csv

Exit status 0 on success, 2 when the input fails to parse or validate.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .device import run_exhaustive
from .errors import StoryboarderError
from .icc import dump_icc
from .instrument import instrument
from .parser import load_app
from .static_atg import dump_atg, parse_atg_dump
from .storyboard import from_json, run_distill, to_json


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storyboarder",
        description="Extract an interactive storyboard from a declarative app model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_distill = sub.add_parser("distill", help="run the full pipeline on one app model")
    p_distill.add_argument("app", help="path to the .app model file")
    p_distill.add_argument("-o", "--output", help="write the storyboard JSON here")
    p_distill.add_argument("--static-only", action="store_true",
                           help="skip the device phase; graph from code analysis alone")
    p_distill.add_argument("--seed", type=int, default=0, help="dummy-value seed")
    p_distill.add_argument("--explore-depth", type=int, default=1,
                           help="how many waves of newly found pages to explore")
    p_distill.add_argument("--dump-atg", action="store_true",
                           help="print the transition pairs as text")
    p_distill.add_argument("--dump-icc", action="store_true",
                           help="print the extracted parameter table")
    p_distill.add_argument("--metrics", action="store_true",
                           help="print summary metrics")

    p_oracle = sub.add_parser("oracle", help="print the brute-force ground-truth graph")
    p_oracle.add_argument("app", help="path to the .app model file")
    p_oracle.add_argument("--seed", type=int, default=0, help="dummy-value seed")

    p_compare = sub.add_parser("compare", help="diff two ATG dumps")
    p_compare.add_argument("before", help="baseline .atg dump")
    p_compare.add_argument("after", help="candidate .atg dump")

    p_rollup = sub.add_parser("rollup", help="summarize storyboard files as CSV")
    p_rollup.add_argument("storyboards", nargs="+", help="storyboard JSON files")
    p_rollup.add_argument("-o", "--output", help="write the CSV here instead of stdout")
    return parser


def _cmd_distill(args) -> int:
    model = load_app(args.app)
    sb = run_distill(
        model,
        seed=args.seed,
        static_only=args.static_only,
        explore_depth=args.explore_depth,
    )
    printed = False
    if args.dump_atg:
        sys.stdout.write(dump_atg(sb.atg))
        printed = True
    if args.dump_icc:
        sys.stdout.write(dump_icc(sb.icc))
        printed = True
    if args.metrics:
        m = sb.metrics
        print(f"transition_pairs: {m.transition_pairs}")
        print(f"activity_coverage: {m.activity_coverage:.4f}")
        if m.launch_ratio is not None:
            print(f"launch_ratio: {m.launch_ratio:.4f}")
        printed = True
    text = to_json(sb)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    elif not printed:
        print(text)
    return 0


def _cmd_oracle(args) -> int:
    model = instrument(load_app(args.app))
    atg = run_exhaustive(model, seed=args.seed)
    sys.stdout.write(dump_atg(atg))
    return 0


def _cmd_compare(args) -> int:
    with open(args.before, encoding="utf-8") as fh:
        before = parse_atg_dump(fh.read())
    with open(args.after, encoding="utf-8") as fh:
        after = parse_atg_dump(fh.read())
    for source, target in sorted(after - before):
        print(f"+ {source} -> {target}")
    for source, target in sorted(before - after):
        print(f"- {source} -> {target}")
    return 0


def _cmd_rollup(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["package", "revision", "transition_pairs", "activity_coverage", "launch_ratio"]
    )
    for path in args.storyboards:
        with open(path, encoding="utf-8") as fh:
            sb = from_json(fh.read())
        ratio = "" if sb.metrics.launch_ratio is None else f"{sb.metrics.launch_ratio:.4f}"
        writer.writerow(
            [
                sb.app_package,
                sb.app_revision,
                sb.metrics.transition_pairs,
                f"{sb.metrics.activity_coverage:.4f}",
                ratio,
            ]
        )
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


_COMMANDS = {
    "distill": _cmd_distill,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
    "rollup": _cmd_rollup,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (StoryboarderError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
