"""Command-line driver: one subcommand per engine operation plus `serve`.

Exit codes: 0 on success, 1 when the planning domain is unsatisfiable with no
repair available (hard constraints conflict on their own), 2 on input errors.
The REQPLAN_SEED environment variable overrides --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import InconsistentBackground, ParseError, ReqPlanError, ValidationError
from .project_io import (apply_csv_dimension, dumps_document, load_document,
                         read_csv_dimension, save_document)
from . import reports

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--project", required=True, help="project JSON file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for stochastic operations (env REQPLAN_SEED wins)")

    parser = argparse.ArgumentParser(
        prog="reqplan",
        description="Requirements prioritization and release planning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("prioritize", parents=[common],
                   help="rank requirements by group utility")
    p_complete = sub.add_parser("complete", parents=[common],
                                help="fill missing evaluations by factorization")
    p_complete.add_argument("--dimension", help="dimension to complete "
                                                "(default: first)")
    sub.add_parser("mvp", parents=[common],
                   help="select the maximum-utility set within the time budget")
    sub.add_parser("consensus", parents=[common],
                   help="repair release-assignment preferences into one plan")
    sub.add_parser("plan", parents=[common],
                   help="solve the constraint-based release plan")
    p_conf = sub.add_parser("conflicts", parents=[common],
                            help="list minimal conflicts among preferences")
    p_conf.add_argument("--no-background", action="store_true",
                        help="ignore hard constraints (consensus semantics)")
    sub.add_parser("diagnose", parents=[common],
                   help="minimal preference set whose removal restores consistency")
    p_assign = sub.add_parser("assign", parents=[common],
                              help="recommend validators by keyword similarity")
    p_assign.add_argument("--top", type=int, default=3,
                          help="recommendations per requirement")
    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--project", help="optionally preload this project")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_csv = sub.add_parser("import-csv", parents=[common],
                           help="replace one dimension's ratings from CSV "
                                "(rows=requirements, cols=stakeholders, ? missing)")
    p_csv.add_argument("--csv", required=True, help="CSV file to import")
    p_csv.add_argument("--dimension", required=True, help="dimension to replace")
    return parser


def _emit(payload: dict, args) -> None:
    if args.format == "table":
        text = reports.render_table(payload) + "\n"
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int | None:
    env = os.environ.get("REQPLAN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"REQPLAN_SEED must be an integer, got {env!r}")
    return args.seed


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep the contract
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK

    if args.command == "serve":
        return _serve(args)

    try:
        doc = load_document(args.project)
        if args.command == "prioritize":
            _emit(reports.prioritize_payload(doc), args)
        elif args.command == "complete":
            _emit(reports.complete_payload(doc, args.dimension, seed=_seed(args)), args)
        elif args.command == "mvp":
            _emit(reports.mvp_payload(doc), args)
        elif args.command == "consensus":
            _emit(reports.consensus_payload(doc), args)
        elif args.command == "plan":
            payload = reports.plan_payload(doc)
            _emit(payload, args)
            if payload["status"] == "UNSAT":
                return EXIT_UNSAT
        elif args.command == "conflicts":
            _emit(reports.conflicts_payload(doc, background=not args.no_background),
                  args)
        elif args.command == "diagnose":
            _emit(reports.diagnose_payload(doc), args)
        elif args.command == "assign":
            _emit(reports.assign_payload(doc, top_k=args.top), args)
        elif args.command == "import-csv":
            table = read_csv_dimension(args.csv)
            updated = apply_csv_dimension(doc, args.dimension, table)
            if args.out:
                save_document(updated, args.out)
            else:
                sys.stdout.write(dumps_document(updated))
    except InconsistentBackground as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSAT
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ReqPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def _serve(args) -> int:
    import uvicorn

    from .service import create_app

    preload = None
    if args.project:
        preload = load_document(args.project)
    app = create_app(preload)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
