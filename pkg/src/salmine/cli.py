"""Command line: mine-pockets, mine-jordan, bench-pockets, bench-jordan.

Every run writes a fully resolved config.json (timestamps only under
"metadata"), a run.json, a samples.csv and SVG plots into --output.
``--config path/config.json`` re-executes a previous run exactly.
Exit status: 0 converged, 2 budget or rounds exhausted, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .deboor import PocketFunction, true_minima
from .eigen import read_matrix_csv, jordan_test_matrix, format_complex
from .jordan import FIXTURES, Region, mine_jordan, spectra_svg
from .kriging import OptimizerSettings
from .pockets import (MinerSettings, compare_runs, mine_pockets, mine_pockets_baseline,
                      run_svg, samples_csv)
from .streamlines import BundlingParams

EXIT_CONVERGED, EXIT_ERROR, EXIT_EXHAUSTED = 0, 1, 2
COMMANDS = ("mine-pockets", "mine-jordan", "bench-pockets", "bench-jordan")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="salmine", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="re-run from an emitted config.json (other flags ignored)")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", default="out")

    def pocket_flags(sp):
        sp.add_argument("--dim", type=int, default=2)
        sp.add_argument("--budget", type=int, default=30)
        sp.add_argument("--grid", type=int, default=41)
        sp.add_argument("--warp-amplitude", type=float, default=None)

    mp = sub.add_parser("mine-pockets", help="mine de Boor pockets with focused or baseline sampling")
    common(mp)
    pocket_flags(mp)
    mp.add_argument("--method", choices=("focused", "baseline"), default="focused")

    mj = sub.add_parser("mine-jordan", help="infer the Jordan block size in a region")
    common(mj)
    mj.add_argument("--matrix", required=True)
    mj.add_argument("--region", required=True, help='disc as "re+imi:radius"')
    mj.add_argument("--tol", type=float, default=0.1)
    mj.add_argument("--rounds", type=int, default=5)

    bp = sub.add_parser("bench-pockets", help="focused vs baseline over many seeds")
    common(bp)
    pocket_flags(bp)
    bp.add_argument("--seeds", type=int, default=100)
    bp.add_argument("--jobs", type=int, default=1)

    bj = sub.add_parser("bench-jordan", help="Jordan miner over the fixture suite")
    common(bj)
    bj.add_argument("--seeds", type=int, default=10)
    bj.add_argument("--tol", type=float, nargs="+", default=[0.1, 0.5])
    bj.add_argument("--rounds", type=int, default=8)
    bj.add_argument("--jobs", type=int, default=1)
    return p


def _check(cond, name, msg):
    if not cond:
        raise ConfigError(f"{name}: {msg}")


def resolve(args: argparse.Namespace) -> dict:
    """Validated, fully explicit configuration for one invocation."""
    cmd = args.command
    _check(cmd in COMMANDS, "command", f"expected one of {', '.join(COMMANDS)}")
    cfg = {"command": cmd, "seed": int(args.seed), "output": str(args.output)}
    if cmd in ("mine-pockets", "bench-pockets"):
        _check(1 <= args.dim <= 3, "dim", "must be 1, 2 or 3")
        _check(args.budget >= 0, "budget", "must be >= 0")
        _check(args.grid >= 3, "grid", "must be >= 3")
        amp = args.warp_amplitude
        if amp is None:
            amp = 0.2 if cmd == "bench-pockets" else 0.0
        _check(0.0 <= amp <= 0.25, "warp_amplitude", "must lie in [0, 0.25]")
        cfg.update(dim=args.dim, budget=args.budget, grid=args.grid, warp_amplitude=amp,
                   bundling=asdict(BundlingParams()),
                   miner={k: v for k, v in asdict(MinerSettings(points_per_axis=args.grid)).items()
                          if k != "optimizer"})
        if cmd == "mine-pockets":
            cfg["method"] = args.method
        else:
            _check(args.seeds >= 1, "seeds", "must be >= 1")
            _check(args.jobs >= 1, "jobs", "must be >= 1")
            cfg.update(seeds=args.seeds, jobs=args.jobs)
    elif cmd == "mine-jordan":
        _check(0.1 <= args.tol <= 0.5, "tol", "must lie in [0.1, 0.5]")
        _check(args.rounds >= 1, "rounds", "must be >= 1")
        path = Path(args.matrix)
        _check(path.is_file(), "matrix", f"no such file {args.matrix}")
        try:
            region = Region.parse(args.region)
        except ValueError as exc:
            raise ConfigError(f"region: {exc}") from None
        cfg.update(matrix=str(path.resolve()), region=str(region), tol=args.tol, rounds=args.rounds)
    else:
        _check(args.seeds >= 1, "seeds", "must be >= 1")
        _check(all(0.1 <= t <= 0.5 for t in args.tol), "tol", "each must lie in [0.1, 0.5]")
        _check(args.rounds >= 1, "rounds", "must be >= 1")
        _check(args.jobs >= 1, "jobs", "must be >= 1")
        cfg.update(seeds=args.seeds, tol=list(args.tol), rounds=args.rounds, jobs=args.jobs)
    return cfg


def _settings(cfg, seed) -> tuple[BundlingParams, MinerSettings]:
    miner = dict(cfg["miner"])
    # optimizer restarts draw from the run seed's own stream
    settings = MinerSettings(**miner, optimizer=OptimizerSettings(seed=seed))
    return BundlingParams(**cfg["bundling"]), settings


def _source(cfg, seed) -> PocketFunction:
    amp = cfg["warp_amplitude"]
    return PocketFunction(cfg["dim"], seed if amp > 0 else None, amp)


def _dump(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, complex):
        return format_complex(x)
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def _run_mine_pockets(cfg, out: Path) -> int:
    params, settings = _settings(cfg, cfg["seed"])
    src = _source(cfg, cfg["seed"])
    miner = mine_pockets if cfg["method"] == "focused" else mine_pockets_baseline
    run = miner(src, cfg["budget"], params, settings)
    _dump(out / "run.json", run.to_json())
    (out / "samples.csv").write_text(samples_csv(run))
    (out / "samples.svg").write_text(run_svg(run))
    print(f"{run.method}: {run.status}, {run.n_samples} samples, "
          f"{len(run.found_pockets)} pockets")
    return EXIT_CONVERGED if run.status == "converged" else EXIT_EXHAUSTED


def _run_mine_jordan(cfg, out: Path) -> int:
    a = read_matrix_csv(cfg["matrix"])
    report = mine_jordan(a, Region.parse(cfg["region"]), cfg["tol"], cfg["rounds"], cfg["seed"])
    _dump(out / "run.json", report.to_json())
    rows = ["round,level,seed,sign,re,im"]
    level_round = {}
    for r, rs in enumerate(report.rounds):
        for lv in rs.levels:
            level_round[lv] = r
    for s in report.samples:
        for z in s.eigenvalues:
            rows.append(f"{level_round.get(s.level, -1)},{s.level!r},{s.seed},{s.sign},"
                        f"{z.real!r},{z.imag!r}")
    (out / "samples.csv").write_text("\n".join(rows) + "\n")
    (out / "spectra.svg").write_text(spectra_svg(report))
    top = report.top_model
    if top is None:
        print(f"{report.status}: no eigenvalues in region")
    else:
        print(f"{report.status}: rho={top.multiplicity} center={format_complex(top.center)} "
              f"p={report.top_probability:.3f} rounds={report.rounds_used}")
    return EXIT_CONVERGED if report.status == "converged" else EXIT_EXHAUSTED


def bench_pocket_seed(cfg: dict, seed: int) -> dict:
    """Focused and baseline runs for one seed; rejected warps are reported, not run."""
    try:
        src = _source(cfg, seed)
    except ValueError as exc:
        return {"seed": seed, "skipped": str(exc)}
    params, settings = _settings(cfg, seed)
    oracle = true_minima(src, settings.oracle_resolution)
    a = mine_pockets(src, cfg["budget"], params, settings)
    b = mine_pockets_baseline(src, cfg["budget"], params, settings)
    rep = compare_runs(a, b, settings, oracle)
    return {"seed": seed, "focused_total": a.n_samples, "baseline_total": b.n_samples,
            "savings": rep.savings, "focused_status": a.status, "baseline_status": b.status,
            "focused_missed": rep.focused_missed, "baseline_missed": rep.baseline_missed}


def _pool_map(fn, cfg, items, jobs):
    if jobs <= 1:
        return [fn(cfg, it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, [cfg] * len(items), items))


def _run_bench_pockets(cfg, out: Path) -> int:
    # walk seeds upward from --seed until enough valid warps are collected
    rows, skipped = [], []
    nxt = cfg["seed"]
    while len(rows) < cfg["seeds"]:
        need = cfg["seeds"] - len(rows)
        batch = list(range(nxt, nxt + need))
        nxt += need
        for r in _pool_map(bench_pocket_seed, cfg, batch, cfg["jobs"]):
            (skipped if "skipped" in r else rows).append(r)
    fields = ["seed", "focused_total", "baseline_total", "savings", "focused_status",
              "baseline_status", "focused_missed", "baseline_missed"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(r[k]) if isinstance(r[k], float) else r[k]) for k in fields})
    (out / "samples.csv").write_text(buf.getvalue())
    f = np.array([r["focused_total"] for r in rows])
    b = np.array([r["baseline_total"] for r in rows])
    fc = np.array([r["focused_status"] == "converged" for r in rows])
    bc = np.array([r["baseline_status"] == "converged" for r in rows])
    summary = {
        "seeds": [r["seed"] for r in rows],
        "skipped_seeds": [r["seed"] for r in skipped],
        "focused_in_7_15": float(np.mean(fc & (f >= 7) & (f <= 15))),
        "baseline_in_17_23": float(np.mean(bc & (b >= 17) & (b <= 23))),
        "focused_le_baseline": float(np.mean(f <= b)),
        "mean_savings": float(np.mean([r["savings"] for r in rows])),
        "focused_all_found": float(np.mean([r["focused_missed"] == 0 for r in rows])),
        "baseline_all_found": float(np.mean([r["baseline_missed"] == 0 for r in rows])),
        "rows": rows,
    }
    _dump(out / "run.json", summary)
    (out / "totals.svg").write_text(_totals_svg(f, b))
    print(f"focused in [7,15]: {summary['focused_in_7_15']:.2f}  "
          f"baseline in [17,23]: {summary['baseline_in_17_23']:.2f}  "
          f"focused<=baseline: {summary['focused_le_baseline']:.2f}  "
          f"mean savings: {summary['mean_savings']:.2f}")
    return EXIT_CONVERGED if fc.all() and bc.all() else EXIT_EXHAUSTED


def _totals_svg(f, b, size=480) -> str:
    top = max(int(max(f.max(), b.max())), 1) + 1
    sx = (size - 40) / top
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             f'<line x1="20" y1="{size - 20}" x2="{size - 20}" y2="20" stroke="#999"/>']
    for x, y in zip(b, f):
        parts.append(f'<circle cx="{20 + x * sx:.1f}" cy="{size - 20 - y * sx:.1f}" r="3" '
                     f'fill="#1f5fbf" fill-opacity="0.6"/>')
    parts.append('<text x="24" y="16" font-family="monospace" font-size="12">'
                 'x: baseline total, y: focused total</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bench_jordan_case(cfg: dict, case: tuple) -> dict:
    name, seed, tol = case
    structure, region, expected = FIXTURES[name]
    a = jordan_test_matrix(structure, seed)
    rep = mine_jordan(a, region, tol, cfg["rounds"], seed)
    top = rep.top_model
    return {"fixture": name, "seed": seed, "tol": tol, "expected_rho": expected,
            "rho": None if top is None else top.multiplicity,
            "center_error": None if top is None else abs(top.center - region.center),
            "probability": rep.top_probability, "rounds": rep.rounds_used, "status": rep.status}


def _run_bench_jordan(cfg, out: Path) -> int:
    cases = [(name, cfg["seed"] + k, tol) for tol in cfg["tol"] for name in FIXTURES
             for k in range(cfg["seeds"])]
    rows = _pool_map(bench_jordan_case, cfg, cases, cfg["jobs"])
    fields = list(rows[0])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    (out / "samples.csv").write_text(buf.getvalue())
    per_tol = {}
    for tol in cfg["tol"]:
        sel = [r for r in rows if r["tol"] == tol]
        per_tol[repr(tol)] = {
            "mean_rounds": float(np.mean([r["rounds"] for r in sel])),
            "correct": float(np.mean([r["rho"] == r["expected_rho"] for r in sel])),
            "converged": float(np.mean([r["status"] == "converged" for r in sel])),
        }
    _dump(out / "run.json", {"per_tol": per_tol, "rows": rows})
    for tol, s in per_tol.items():
        print(f"tol {tol}: mean rounds {s['mean_rounds']:.2f}, correct {s['correct']:.2f}, "
              f"converged {s['converged']:.2f}")
    return EXIT_CONVERGED if all(r["status"] == "converged" for r in rows) else EXIT_EXHAUSTED


RUNNERS = {"mine-pockets": _run_mine_pockets, "mine-jordan": _run_mine_jordan,
           "bench-pockets": _run_bench_pockets, "bench-jordan": _run_bench_jordan}


def run(cfg: dict) -> int:
    out = Path(cfg["output"])
    out.mkdir(parents=True, exist_ok=True)
    doc = dict(cfg)
    doc["metadata"] = {"created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
                       "version": __version__}
    _dump(out / "config.json", doc)
    return RUNNERS[cfg["command"]](cfg, out)


def load_config(path) -> dict:
    doc = json.loads(Path(path).read_text())
    doc.pop("metadata", None)
    _check(doc.get("command") in COMMANDS, "command", "missing or unknown in config file")
    return doc


def _failing_module(exc: BaseException) -> str:
    """Innermost package module on the traceback, e.g. "eigen"."""
    name = "cli"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith(__package__ + "."):
            name = mod.rsplit(".", 1)[-1]
    return name


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
        elif args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_ERROR
        else:
            cfg = resolve(args)
        return run(cfg)
    except ConfigError as exc:
        print(f"salmine: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001 - reported with module context
        print(f"salmine: {_failing_module(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
