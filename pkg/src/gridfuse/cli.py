"""Command line entry point.

    gridfuse topology --config scenario.json [--out DIR] [--format json|csv]
    gridfuse simulate --scenario fig6a
    gridfuse detect   --config scenario.json
    gridfuse analyze  --config sweep.json --seed 7 --trials 100000

Exit codes: 0 success, 2 invalid configuration or input, 3 simulation
failure.  Output files go to ``--out``, else ``$GRIDFUSE_OUT_DIR``, else the
config's ``output.dir``; with none of those the document is printed after
the summary line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

from . import topology as topo_mod
from .analysis import SWEEP_COLUMNS, sweep
from .config import ScenarioConfig, builtin_names, load, load_builtin
from .detection import detect
from .errors import ConfigError, InputError, SimulationError
from .scenarios import run_config
from .sim import message_log_csv

OUT_ENV = "GRIDFUSE_OUT_DIR"
log = logging.getLogger("gridfuse")


def _config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config and args.scenario:
        raise ConfigError("use either --config or --scenario, not both")
    if args.scenario:
        cfg = load_builtin(args.scenario)
    elif args.config:
        cfg = load(args.config)
    else:
        raise ConfigError("a --config file or --scenario name is required")
    d = cfg.to_dict()
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
        d = cfg.to_dict()
    if getattr(args, "trials", None) is not None:
        d["analysis"]["trials"] = args.trials
    if args.n is not None or args.d0 is not None:
        if d["topology"].get("hierarchy"):
            raise ConfigError("--n/--d0 apply to flat grids only")
        if args.n is not None:
            d["topology"]["n"] = args.n
        if args.d0 is not None:
            d["topology"]["d0"] = args.d0
    return ScenarioConfig.from_dict(d)  # re-validates after overrides


def _out_dir(args: argparse.Namespace, cfg: ScenarioConfig) -> Optional[Path]:
    chosen = args.out or os.environ.get(OUT_ENV) or cfg.output_dir
    if not chosen:
        return None
    path = Path(chosen)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(args, cfg, summary: str, files: Dict[str, str], primary: Dict[str, str]) -> None:
    """Write ``files`` to the output dir, or print the primary document."""
    print(summary)
    out = _out_dir(args, cfg)
    if out is None:
        sys.stdout.write(primary[args.format])
        return
    for name, text in files.items():
        (out / name).write_text(text)
        log.info("wrote %s", out / name)


def cmd_topology(args: argparse.Namespace) -> int:
    cfg = _config(args)
    topo = cfg.topology.build()
    doc = topo_mod.to_json(topo) + "\n"
    edges = topo_mod.edge_list_csv(topo)
    d = topo_mod.to_json_dict(topo)
    grids = [d] if d["kind"] == "grid" else [c["grid"] for c in d["clusters"]] + [d["top"]]
    n_combine = sum(len(g["links"]["combine"]) for g in grids)
    n_row = sum(len(g["links"]["row"]) for g in grids)
    n_nodes = len(topo.nodes)
    summary = f"{cfg.name}: nodes={n_nodes} combine_links={n_combine} row_links={n_row}"
    files = {"topology.json": doc, "topology.dot": topo_mod.to_dot(topo)}
    if args.format == "csv":
        files["edges.csv"] = edges
    _emit(args, cfg, summary, files, {"json": doc, "csv": edges})
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    result = run_config(cfg)
    doc = _dump({"scenario": cfg.to_dict(), **result.to_dict()})
    msgs = message_log_csv(result.report)
    files = {"report.json": doc}
    if cfg.message_log or args.format == "csv":
        files["messages.csv"] = msgs
    _emit(args, cfg, result.summary(), files, {"json": doc, "csv": msgs})
    return 0


def cmd_detect(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if cfg.topology.clusters is not None:
        raise ConfigError("detection is defined for flat grids only")
    topo = cfg.topology.build()
    spec = cfg.fusion.build()
    report = detect(topo, spec, cfg.build_readings(), cfg.faults)
    summary = (
        f"{cfg.name}: row_result={report.row_result} column_result={report.column_result} "
        f"verdict={report.verdict.value}"
    )
    doc = _dump({"scenario": cfg.to_dict(), "detection": report.to_dict()})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pass", "index", "partial"])
    w.writerows(("row", i, v) for i, v in enumerate(report.row_partials))
    w.writerows(("column", i, v) for i, v in enumerate(report.column_partials))
    files = {"detection.json": doc}
    if args.format == "csv":
        files["detection.csv"] = buf.getvalue()
    _emit(args, cfg, summary, files, {"json": doc, "csv": buf.getvalue()})
    return 0


def _sweep_csv(rows: List[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row[k] is None else row[k]) for k in SWEEP_COLUMNS})
    return buf.getvalue()


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _config(args)
    a = cfg.analysis
    if a.kind != "montecarlo":
        raise ConfigError("analyze needs analysis.kind = 'montecarlo'")
    grid = cfg.topology.grid
    rows = sweep(
        grid.n,
        a.m,
        list(a.p_f),
        grid,
        cfg.fusion.build(),
        a.trials,
        cfg.seed,
        failure_mode=a.failure_mode,
        workers=a.workers,
    )
    doc = _dump(
        {
            "scenario": cfg.to_dict(),
            "n": grid.n,
            "m": a.m,
            "trials": a.trials,
            "seed": cfg.seed,
            "rows": rows,
        }
    )
    table = _sweep_csv(rows)
    worst = max(abs(r["published_minus_enumeration"] or 0.0) for r in rows)
    summary = (
        f"{cfg.name}: N={grid.n} M={a.m} points={len(rows)} trials={a.trials} "
        f"max|published-enumeration|={worst:.6g}"
    )
    _emit(args, cfg, summary, {"analysis.json": doc, "sweep.csv": table}, {"json": doc, "csv": table})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridfuse", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (
        ("topology", cmd_topology, "export the grid as JSON and Graphviz"),
        ("simulate", cmd_simulate, "run one fusion simulation"),
        ("detect", cmd_detect, "run the row/column error check"),
        ("analyze", cmd_analyze, "error-probability sweep"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.set_defaults(func=fn)
        p.add_argument("--config", help="scenario JSON file")
        p.add_argument("--scenario", help=f"built-in scenario ({', '.join(builtin_names())})")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV})")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--n", type=int, help="override topology N")
        p.add_argument("--d0", type=int, help="override topology D0")
        if name == "analyze":
            p.add_argument("--trials", type=int, help="override Monte Carlo trials")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
