"""Command-line surface: simulate | estimate | plot | montecarlo.

Exit codes: 0 success, 2 validation failure, 3 usage error, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import fields
from pathlib import Path

from . import kernels
from .dgp import GENERATOR_ID, DgpConfig, InvalidConfig, simulate
from .estimators import (
    TAGS,
    EventStudyEstimate,
    UnknownEstimator,
    bjs_closed_form,
    estimate,
)
from .inference import BootstrapConfig, bootstrap
from .montecarlo import run_mc
from .oracle import population_curve
from .panel import PanelError
from .svgplot import event_study_svg
from .tableio import (
    CsvFormatError,
    TableRow,
    parse_config_file,
    read_estimate_table,
    read_panel_csv,
    write_estimate_table,
    write_panel_csv,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_USAGE = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


class EmptyTable(ValueError):
    """Estimate table contains no plottable rows."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_DGP_FIELDS = {f.name: f.type for f in fields(DgpConfig)}
_INT_KEYS = {"t_min", "t_max", "n_treated", "n_control", "seed"}


def _dgp_from_args(args) -> DgpConfig:
    """Merge config-file values and flags; flags win."""
    values: dict = {}
    if args.config:
        for key, raw in parse_config_file(args.config).items():
            if key not in _DGP_FIELDS:
                continue  # montecarlo keys like draws handled by callers
            values[key] = int(raw) if key in _INT_KEYS else float(raw)
    for name in _DGP_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return DgpConfig(**values)


def _add_dgp_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key=value config file; flags override")
    p.add_argument("--gamma", type=float)
    p.add_argument("--t-min", dest="t_min", type=int)
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--n-treated", dest="n_treated", type=int)
    p.add_argument("--n-control", dest="n_control", type=int)
    p.add_argument("--error-sd", dest="error_sd", type=float)
    p.add_argument("--seed", type=int)


def _parse_tags(raw: list[str]) -> list[str]:
    tags: list[str] = []
    for chunk in raw:
        for tag in chunk.split(","):
            tag = tag.strip()
            if not tag:
                continue
            if tag == "all":
                tags.extend(t for t in TAGS if t not in tags)
            elif tag in TAGS:
                if tag not in tags:
                    tags.append(tag)
            else:
                raise UnknownEstimator(f"unknown estimator {tag!r}; choose from {TAGS} or 'all'")
    return tags or list(TAGS)


def build_parser() -> _Parser:
    parser = _Parser(prog="evstudy", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="draw one panel from the trend-violation DGP")
    _add_dgp_flags(p_sim)
    p_sim.add_argument("--out", type=Path, required=True, help="panel CSV output path")

    p_est = sub.add_parser("estimate", help="run event-study estimators on a panel CSV")
    p_est.add_argument("input", type=Path, help="panel CSV (unit,time,treated,outcome)")
    p_est.add_argument("--estimator", action="append", default=[],
                       help="tag, comma list, or 'all' (default all); repeatable")
    p_est.add_argument("--bootstrap", action="store_true",
                       help="add stratified unit-bootstrap se/ci columns")
    p_est.add_argument("--replications", type=int, default=999)
    p_est.add_argument("--boot-seed", type=int, default=0)
    p_est.add_argument("--level", type=float, default=0.95)
    p_est.add_argument("--method", choices=["normal", "percentile"], default="normal")
    p_est.add_argument("--bjs-pre", type=int, default=None,
                       help="number of BJS pre coefficients; earlier periods pool into the baseline")
    p_est.add_argument("--out", type=Path, required=True, help="estimate table output path")

    p_plot = sub.add_parser("plot", help="render event-study SVG plots from an estimate table")
    p_plot.add_argument("input", type=Path, help="estimate table CSV")
    p_plot.add_argument("--overlay-population", type=float, default=None, metavar="GAMMA",
                        help="overlay the analytic population curve for this trend slope")
    p_plot.add_argument("--split-bjs", action="store_true",
                        help="write BJS pre and post coefficients to separate files")
    p_plot.add_argument("--out", type=Path, required=True,
                        help="SVG path; with several estimators the tag is appended to the stem")

    p_mc = sub.add_parser("montecarlo", help="average estimators over repeated draws vs the population oracle")
    _add_dgp_flags(p_mc)
    p_mc.add_argument("--estimator", action="append", default=[])
    p_mc.add_argument("--draws", type=int, default=2000)
    p_mc.add_argument("--master-seed", dest="master_seed", type=int, default=0)
    p_mc.add_argument("--out", type=Path, required=True, help="report table output path")
    return parser


def _cmd_simulate(args) -> int:
    config = _dgp_from_args(args)
    panel = simulate(config)
    write_panel_csv(panel, args.out)
    print(f"generator: {GENERATOR_ID}")
    print(
        f"gamma={config.gamma} t_min={config.t_min} t_max={config.t_max} "
        f"n_treated={config.n_treated} n_control={config.n_control} "
        f"error_sd={config.error_sd} seed={config.seed}"
    )
    print(f"wrote {panel.n_units * panel.n_periods} data rows to {args.out}")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    tags = _parse_tags(args.estimator)
    panel = read_panel_csv(args.input)
    if args.bjs_pre is not None and not (1 <= args.bjs_pre <= -panel.t_min):
        raise UsageError(f"--bjs-pre must be in [1, {-panel.t_min}] for this panel")
    results: list[EventStudyEstimate] = []
    for tag in tags:
        if args.bootstrap:
            config = BootstrapConfig(replications=args.replications, seed=args.boot_seed,
                                     level=args.level, method=args.method)
            n_pre = args.bjs_pre if tag == "bjs" else None
            results.append(bootstrap(panel, tag, config, n_pre=n_pre))
        elif tag == "bjs" and args.bjs_pre is not None:
            results.append(bjs_closed_form(panel, n_pre=args.bjs_pre))
        else:
            results.append(estimate(panel, tag))
    write_estimate_table(results, args.out)
    print(f"wrote estimates for {', '.join(tags)} to {args.out}")
    return EXIT_OK


def _plot_path(out: Path, tag: str, multi: bool, part: str | None = None) -> Path:
    stem = out.with_suffix("")
    name = str(stem)
    if multi:
        name += f"_{tag}"
    if part:
        name += f"_{part}"
    return Path(name + (out.suffix or ".svg"))


def _overlay_for(tag: str, gamma: float | None, rows: list[TableRow]):
    if gamma is None:
        return None
    rel = [row.relative_time for row in rows]
    t_min, t_max = min(rel) + 1, max(rel) + 1
    curve = population_curve(tag, gamma, t_min, t_max)
    return sorted(curve.values.items())


def _cmd_plot(args) -> int:
    rows = read_estimate_table(args.input)
    by_tag: dict[str, list[TableRow]] = {}
    for row in rows:
        by_tag.setdefault(row.estimator, []).append(row)
    if not by_tag:
        raise EmptyTable(f"no rows in {args.input}")
    multi = len(by_tag) > 1
    written = []
    for tag, tag_rows in by_tag.items():
        points = [
            (row.relative_time, row.coefficient, row.ci_low, row.ci_high)
            for row in tag_rows
            if not row.omitted and row.coefficient is not None
        ]
        if not points:
            raise EmptyTable(f"no non-omitted coefficients for {tag}")
        overlay = _overlay_for(tag, args.overlay_population, tag_rows)
        if tag == "bjs" and args.split_bjs:
            halves = [
                ("pre", [p for p in points if p[0] < 0]),
                ("post", [p for p in points if p[0] >= 0]),
            ]
            for part, part_points in halves:
                if not part_points:
                    continue
                part_overlay = None
                if overlay is not None:
                    keep = (lambda r: r < 0) if part == "pre" else (lambda r: r >= 0)
                    part_overlay = [(r, v) for r, v in overlay if keep(r)]
                path = _plot_path(args.out, tag, multi, part)
                path.write_text(
                    event_study_svg(f"bjs ({part}-treatment)", part_points, part_overlay),
                    encoding="utf-8",
                )
                written.append(path)
        else:
            path = _plot_path(args.out, tag, multi)
            path.write_text(event_study_svg(tag, points, overlay), encoding="utf-8")
            written.append(path)
    print("wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def _cmd_montecarlo(args) -> int:
    tags = _parse_tags(args.estimator)
    config = _dgp_from_args(args)
    draws, master_seed = args.draws, args.master_seed
    if args.config:
        file_values = parse_config_file(args.config)
        if "draws" in file_values and "--draws" not in sys.argv:
            draws = int(file_values["draws"])
        if "master_seed" in file_values and "--master-seed" not in sys.argv:
            master_seed = int(file_values["master_seed"])
    report = run_mc(config, tags, draws, master_seed)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["estimator", "relative_time", "mean_coefficient",
                    "population_value", "abs_deviation", "mc_se"])
        for tag in tags:
            for r in sorted(report.means[tag]):
                mean = report.means[tag][r]
                pop = report.population[tag][r]
                w.writerow([tag, r, repr(mean), repr(pop), repr(abs(mean - pop)),
                            repr(report.mc_se[tag][r])])
    print(f"wrote Monte Carlo report ({report.draws} draws, backend={kernels.active_backend()}) to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "plot": _cmd_plot,
    "montecarlo": _cmd_montecarlo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownEstimator as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PanelError, InvalidConfig, CsvFormatError, EmptyTable, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
