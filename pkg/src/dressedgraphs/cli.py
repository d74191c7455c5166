"""Command-line entry point: solve, scan, mc, validate, plotdata.

Exit codes: 0 ok, 2 unreadable input, 3 invalid input or unknown figure id,
4 solver failure, 5 a validation row failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .eigensolve import DEFAULT_STATES
from .errors import GraphError, ValidationError
from .graph import GraphSpec

EXIT_PARSE, EXIT_INVALID, EXIT_SOLVER, EXIT_FAILED_ROW = 2, 3, 4, 5


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_solve(args):
    from .moments import dump_table_csv
    from .pipeline import analyze, to_json
    from .wavefunctions import dump_states_csv

    spec = GraphSpec.from_dict(_load_json(args.input))
    rep = analyze(spec, args.states, args.quad_order, keep_states=args.dump_states)
    text = to_json(rep.to_dict()) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return 0
    out = _out_dir(args)
    (out / "report.json").write_text(text)
    if args.dump_states:
        with open(out / "states.csv", "w", newline="") as fh:
            dump_states_csv(rep.states, fh)
    if args.dump_moments:
        with open(out / "moments.csv", "w", newline="") as fh:
            dump_table_csv(rep.table, fh)
    return 0


def _ensemble_cfg(args, kind):
    from .ensemble import load_config
    data = _load_json(args.config)
    data.setdefault("kind", kind)
    cfg = load_config(data)
    if args.states is not None:
        cfg = replace(cfg, n_states=args.states)
    if args.quad_order is not None:
        cfg = replace(cfg, quad_order=args.quad_order)
    if kind == "mc" and args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def cmd_scan(args):
    from .ensemble import run_scan, write_outputs
    cfg = _ensemble_cfg(args, "scan")
    t = time.perf_counter()
    recs = run_scan(cfg, args.workers)
    write_outputs(recs, cfg, _out_dir(args), time.perf_counter() - t)
    return 0


def cmd_mc(args):
    from .ensemble import run_mc, write_outputs
    cfg = _ensemble_cfg(args, "mc")
    t = time.perf_counter()
    res = run_mc(cfg, args.workers)
    write_outputs(res.records, cfg, _out_dir(args), time.perf_counter() - t)
    return 0


def cmd_validate(args):
    from .validation import SUITES, write_rows
    if args.suite not in SUITES:
        raise ValidationError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    kwargs = {}
    if args.states is not None:
        kwargs["n_states"] = args.states
    if args.suite == "oracle-wires" and args.fd_grid is not None:
        kwargs["n_grid"] = args.fd_grid
    if args.seed is not None and args.suite in ("oracle-wires", "rotation-invariance"):
        kwargs["seed"] = args.seed
    rows = SUITES[args.suite](**kwargs)
    with open(_out_dir(args) / f"validate-{args.suite}.csv", "w", newline="") as fh:
        write_rows(rows, fh)
    failed = [r for r in rows if not r.ok]
    print(f"{args.suite}: {len(rows) - len(failed)}/{len(rows)} rows pass")
    return EXIT_FAILED_ROW if failed else 0


def cmd_plotdata(args):
    from .figures import figure_data, write_panels
    cfg = _load_json(args.config) if args.config else {}
    if args.states is not None:
        cfg["n_states"] = args.states
    if args.seed is not None:
        cfg["seed"] = args.seed
    for p in write_panels(args.figure, figure_data(args.figure, cfg), _out_dir(args)):
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dressedgraphs", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, states_default=None):
        p.add_argument("--states", type=int, default=states_default, help="number of retained states")
        p.add_argument("--quad-order", type=int, default=None, help="Gauss-Legendre nodes per panel")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--fd-grid", type=int, default=None, help="finite-difference grid points")
        p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("solve", help="solve one graph and write a response report")
    p.add_argument("input", help="graph JSON")
    p.add_argument("--dump-states", action="store_true")
    p.add_argument("--dump-moments", action="store_true")
    common(p, DEFAULT_STATES)
    p.set_defaults(func=cmd_solve)

    for name, fn, helptext in (("scan", cmd_scan, "deterministic parameter grid"),
                               ("mc", cmd_mc, "seeded Monte Carlo ensemble")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="ensemble config JSON")
        p.add_argument("--workers", type=int, default=1)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("validate", help="run a named property suite")
    p.add_argument("suite")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plotdata", help="emit CSV data behind a figure")
    p.add_argument("figure")
    p.add_argument("--config", default=None, help="optional JSON overrides")
    common(p)
    p.set_defaults(func=cmd_plotdata)
    return ap


def _fail(code, exc):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve" and args.quad_order is None:
        from .quadrature import PANEL_NODES
        args.quad_order = PANEL_NODES
    try:
        return args.func(args)
    except InputError as exc:
        return _fail(EXIT_PARSE, exc)
    except ValidationError as exc:
        return _fail(EXIT_INVALID, exc)
    except GraphError as exc:
        return _fail(EXIT_SOLVER, exc)


if __name__ == "__main__":
    sys.exit(main())
