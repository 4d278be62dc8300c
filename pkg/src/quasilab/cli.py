"""Command line entry point: ``quasilab run|validate|report|list-scenarios``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


def _cmd_run(args) -> int:
    try:
        cfg = harness.load_config(args.config)
    except (harness.ConfigError, FileNotFoundError) as exc:
        return _report_invalid(exc)
    out = harness.output_directory(args.output_dir)
    status = EXIT_OK
    for sc in cfg["scenarios"]:
        if args.only and sc["name"] not in args.only:
            continue
        rec = harness.run_scenario(sc)
        path = harness.write_record(rec, out)
        if args.format == "machine":
            sys.stdout.write("\n".join(harness.machine_lines(rec)) + "\n")
        else:
            sys.stdout.write(harness.table_text(rec) + f"record     {path}\n\n")
        if rec["status"] != "ok":
            status = EXIT_FAILED
    return status


def _report_invalid(exc) -> int:
    problems = getattr(exc, "problems", [str(exc)])
    print("invalid config:", file=sys.stderr)
    for p in problems:
        print(f"  {p}", file=sys.stderr)
    return EXIT_INVALID


def _cmd_validate(args) -> int:
    try:
        cfg = harness.load_config(args.config)
    except (harness.ConfigError, FileNotFoundError) as exc:
        return _report_invalid(exc)
    names = ", ".join(s["name"] for s in cfg["scenarios"])
    print(f"ok: {len(cfg['scenarios'])} scenario(s): {names}")
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        rec = json.loads(Path(args.record).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read record: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "machine":
        sys.stdout.write("\n".join(harness.machine_lines(rec)) + "\n")
    else:
        sys.stdout.write(harness.table_text(rec))
    return EXIT_OK


def _cmd_list(args) -> int:
    for name, path in harness.shipped_scenarios().items():
        cfg = json.loads(path.read_text())
        print(f"{name:24s} {cfg.get('description', '')}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasilab", description="Run declarative scenario configs.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute every scenario in a config")
    run.add_argument("config", help="config path or shipped scenario name")
    run.add_argument("--output-dir", help=f"where records go (default ${harness.OUTPUT_ENV} or ./{harness.DEFAULT_OUTPUT})")
    run.add_argument("--format", choices=("table-text", "machine"), default="table-text")
    run.add_argument("--only", nargs="+", metavar="NAME", help="run just these scenarios")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="check a config against the schema")
    val.add_argument("config")
    val.set_defaults(func=_cmd_validate)

    rep = sub.add_parser("report", help="render a saved record.json")
    rep.add_argument("record")
    rep.add_argument("--format", choices=("table-text", "machine"), default="table-text")
    rep.set_defaults(func=_cmd_report)

    ls = sub.add_parser("list-scenarios", help="list shipped configs")
    ls.set_defaults(func=_cmd_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
