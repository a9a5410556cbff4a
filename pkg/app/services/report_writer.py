# app/services/report_writer.py
import logging
from pathlib import Path
from typing import List

import pandas as pd

from app.models.schemas import CostReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6f"


def _write(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def emit_report(report: CostReport, directory: str) -> List[Path]:
    """Write the report CSVs into directory and return their paths"""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)

    per_slot = pd.DataFrame(
        [row.model_dump() for row in report.per_slot],
        columns=["slot", "scheme", "mno", "avg_cost"],
    )
    summary = pd.DataFrame(
        [row.model_dump() for row in report.summary],
        columns=["scheme", "mno", "total", "reduction_pct"],
    )
    meta = pd.DataFrame(sorted(report.meta.items()), columns=["key", "value"])

    paths = [
        _write(per_slot, out / "per_slot_costs.csv"),
        _write(summary, out / "summary.csv"),
        _write(meta, out / "meta.csv"),
    ]
    if report.sleep_fraction:
        sleep = pd.DataFrame({"slot": range(len(report.sleep_fraction)), "sleep_fraction": report.sleep_fraction})
        paths.append(_write(sleep, out / "per_slot_sleep.csv"))
    if report.payments:
        payments = pd.DataFrame({"slot": range(len(report.payments)), "avg_payment_net": report.payments})
        paths.append(_write(payments, out / "payments.csv"))

    logger.info(f"Wrote {len(paths)} report files to {out}")
    return paths
