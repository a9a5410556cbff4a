# app/utils/validators.py
from pathlib import Path
from typing import List

import pandas as pd

from app.core.exceptions import IngestionError

PRICE_COLUMNS = ["slot", "alpha", "alpha_buy_pred", "alpha_sell_pred"]
PROFILE_COLUMNS = ["slot", "theta"]


def read_curve_csv(path: str, columns: List[str]) -> pd.DataFrame:
    """Read a per-slot curve file and check its header and slot index"""
    if not Path(path).is_file():
        raise IngestionError("file not found", path=path)
    try:
        frame = pd.read_csv(path, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise IngestionError(f"malformed CSV: {e}", path=path)
    if not isinstance(frame.index, pd.RangeIndex):
        # rows with one field more than the header turn the first field into the index
        raise IngestionError("malformed CSV: rows have more fields than the header", path=path)

    frame.columns = [str(c).strip() for c in frame.columns]
    if list(frame.columns) != columns:
        raise IngestionError(f"expected header {','.join(columns)}, got {','.join(frame.columns)}", path=path)
    if frame.empty:
        raise IngestionError("no data rows", path=path)

    for column in columns:
        converted = pd.to_numeric(frame[column], errors="coerce")
        bad = converted.isna()
        if bad.any():
            row = int(bad.idxmax())
            raise IngestionError(f"non-numeric {column} at row {row}", path=path, row=row)
        frame[column] = converted

    expected = list(range(len(frame)))
    if frame["slot"].tolist() != expected:
        raise IngestionError("slot column must run 0..N-1 in order", path=path)
    return frame


def check_price_rows(frame: pd.DataFrame, path: str) -> None:
    for row in frame.itertuples(index=False):
        slot = int(row.slot)
        if min(row.alpha, row.alpha_buy_pred, row.alpha_sell_pred) < 0:
            raise IngestionError(f"negative price at slot {slot}", path=path, row=slot)
        if not row.alpha_sell_pred < row.alpha < row.alpha_buy_pred:
            raise IngestionError(f"price ordering violated at slot {slot}", path=path, row=slot)


def check_profile_rows(frame: pd.DataFrame, path: str) -> None:
    for row in frame.itertuples(index=False):
        if not 0 < row.theta <= 1:
            raise IngestionError(f"theta outside (0, 1] at slot {int(row.slot)}", path=path, row=int(row.slot))
