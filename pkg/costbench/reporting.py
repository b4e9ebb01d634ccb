"""Writers for curve, capacity, report, manifest and executor output files.

Every writer produces byte-identical files for identical inputs: fixed
column order, plain decimal notation and no timestamps.
"""

import csv
import re
from decimal import Decimal
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from costbench.flatfile import dump_flat
from costbench.models import Aggregate, CostCurve, CostDimension, Report

DIMENSIONS: Tuple[CostDimension, ...] = tuple(CostDimension)
CURVE_HEADER = ["label", "rate", "total"] + [dim.value for dim in DIMENSIONS]
CAPACITY_HEADER = ["rate", "m_probed", "slope", "verdict"]
LONG_HEADER = ["scenario", "rate", "dimension", "usd_per_hour"]
AGGREGATE_HEADER = ["key", "window_start", "count", "sum", "min", "max", "mean"]
RECORD_HEADER = ["key", "value"]


def _money(value: Decimal) -> str:
    return format(value, "f")


def safe_name(label: str) -> str:
    """File-name friendly version of a label."""
    return re.sub(r"[^A-Za-z0-9._-]+", "_", label).strip("_") or "scenario"


def _write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.debug(f"Wrote {path}")
    return path


def write_curve_csv(curve: CostCurve, out_dir: Path) -> Path:
    """One row per load: label, rate, total and every dimension."""
    rows = [
        [curve.label, _money(point.rate), _money(point.cost.total)]
        + [_money(point.cost.component(dim)) for dim in DIMENSIONS]
        for point in curve.points
    ]
    return _write_rows(Path(out_dir) / f"{safe_name(curve.label)}.curve.csv", CURVE_HEADER, rows)


def write_capacity_csv(curve: CostCurve, out_dir: Path) -> Optional[Path]:
    """Audit trail of every capacity probe; None for curves without capacity results."""
    if not any(point.capacity for point in curve.points):
        return None
    rows = []
    for point in curve.points:
        for probe in point.capacity.probes:
            rows.append([
                _money(point.rate),
                str(probe.m),
                repr(probe.slope),
                "pass" if probe.passed else "fail",
            ])
    return _write_rows(Path(out_dir) / f"{safe_name(curve.label)}.capacity.csv", CAPACITY_HEADER, rows)


def write_long_csv(curves: Sequence[CostCurve], path: Path) -> Path:
    """Plot-ready long format: one row per scenario, load and dimension."""
    rows = [
        [curve.label, _money(point.rate), dim.value, _money(point.cost.component(dim))]
        for curve in curves
        for point in curve.points
        for dim in DIMENSIONS
    ]
    return _write_rows(Path(path), LONG_HEADER, rows)


def write_report(report: Report, out_dir: Path) -> Path:
    """Write report.json."""
    path = Path(out_dir) / "report.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote report to {path}")
    return path


def write_aggregates_csv(aggregates: Sequence[Aggregate], path: Path) -> Path:
    return _write_rows(Path(path), AGGREGATE_HEADER, [agg.csv_row() for agg in aggregates])


def write_records_csv(records: Iterable[Tuple[str, object]], path: Path) -> Path:
    return _write_rows(Path(path), RECORD_HEADER, [[key, repr(value)] for key, value in records])


def write_manifest(params: Dict[str, object], out_dir: Path) -> Path:
    """Echo run parameters as a flat key-value file with sorted keys."""
    path = Path(out_dir) / "manifest.env"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_flat(sorted(params.items())), encoding="utf-8")
    logger.debug(f"Wrote manifest {path}")
    return path


def written_files(out_dir: Path) -> List[str]:
    """Relative paths of every file below out_dir, sorted."""
    root = Path(out_dir)
    return sorted(str(p.relative_to(root)) for p in root.rglob("*") if p.is_file())
