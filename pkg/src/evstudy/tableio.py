"""CSV schemas and the flat key=value config format used by the CLI.

Panel files carry exactly the columns ``unit,time,treated,outcome``;
estimate tables carry ``estimator,relative_time,coefficient,std_error,
ci_low,ci_high,omitted``. Decimals are written with repr, the shortest
representation that round-trips, so emitted files are stable golden-file
targets.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .estimators import EventStudyEstimate
from .panel import NonIntegerTime, PanelDataset, validate_panel

PANEL_COLUMNS = ["unit", "time", "treated", "outcome"]
ESTIMATE_COLUMNS = [
    "estimator", "relative_time", "coefficient", "std_error", "ci_low", "ci_high", "omitted",
]


class CsvFormatError(ValueError):
    """Input file does not match the expected schema."""


def _num(x: float) -> str:
    return repr(float(x))


def write_panel_csv(panel: PanelDataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(PANEL_COLUMNS)
        for uid, t, d, y in panel.to_rows():
            w.writerow([uid, t, d, _num(y)])


def read_panel_csv(path) -> PanelDataset:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or sorted(reader.fieldnames) != sorted(PANEL_COLUMNS):
            raise CsvFormatError(
                f"expected columns {PANEL_COLUMNS}, got {reader.fieldnames}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if None in row or any(v is None for v in row.values()):
                raise CsvFormatError(f"line {lineno}: wrong number of fields")
            try:
                t = int(row["time"])
            except ValueError:
                raise NonIntegerTime(f"line {lineno}: time {row['time']!r}") from None
            if row["treated"] not in ("0", "1"):
                raise CsvFormatError(f"line {lineno}: treated must be 0 or 1")
            try:
                y = float(row["outcome"])
            except ValueError:
                raise CsvFormatError(f"line {lineno}: bad outcome {row['outcome']!r}") from None
            rows.append((row["unit"], t, int(row["treated"]), y))
    return validate_panel(rows)


def estimate_table_rows(estimates: list[EventStudyEstimate]) -> list[dict[str, str]]:
    """Flatten estimates into table rows sorted by (estimator, relative_time)."""
    rows = []
    for est in estimates:
        rel = sorted(set(est.coefficients) | set(est.omitted))
        for r in rel:
            if r in est.omitted:
                rows.append({
                    "estimator": est.estimator, "relative_time": str(r),
                    "coefficient": "", "std_error": "", "ci_low": "", "ci_high": "",
                    "omitted": "1",
                })
            else:
                se = est.se.get(r) if est.se else None
                ci = est.ci.get(r) if est.ci else None
                rows.append({
                    "estimator": est.estimator, "relative_time": str(r),
                    "coefficient": _num(est.coefficients[r]),
                    "std_error": _num(se) if se is not None else "",
                    "ci_low": _num(ci[0]) if ci is not None else "",
                    "ci_high": _num(ci[1]) if ci is not None else "",
                    "omitted": "0",
                })
    rows.sort(key=lambda row: (row["estimator"], int(row["relative_time"])))
    return rows


def write_estimate_table(estimates: list[EventStudyEstimate], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=ESTIMATE_COLUMNS)
        w.writeheader()
        w.writerows(estimate_table_rows(estimates))


@dataclass
class TableRow:
    estimator: str
    relative_time: int
    coefficient: float | None
    std_error: float | None
    ci_low: float | None
    ci_high: float | None
    omitted: bool


def read_estimate_table(path) -> list[TableRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ESTIMATE_COLUMNS:
            raise CsvFormatError(
                f"expected columns {ESTIMATE_COLUMNS}, got {reader.fieldnames}"
            )
        out = []
        for row in reader:
            def opt(key):
                return float(row[key]) if row[key] != "" else None
            out.append(TableRow(
                estimator=row["estimator"],
                relative_time=int(row["relative_time"]),
                coefficient=opt("coefficient"),
                std_error=opt("std_error"),
                ci_low=opt("ci_low"),
                ci_high=opt("ci_high"),
                omitted=row["omitted"] == "1",
            ))
    return out


def parse_config_file(path) -> dict[str, str]:
    """Flat key=value config; '#' starts a comment, blank lines ignored."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CsvFormatError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values
