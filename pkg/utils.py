import json
import math
import sys
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from config import Config


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def table_frame(rows: Iterable[dict], columns: Sequence[str]) -> pd.DataFrame:
    """Rows as a DataFrame with a fixed column order (missing keys become empty cells)."""
    return pd.DataFrame(list(rows), columns=list(columns))


def render_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    frame = table_frame(rows, columns)
    return frame.to_csv(index=False, float_format=f"%.{Config.CSV_DIGITS}g", na_rep="", lineterminator="\n")


def render_json(rows: Iterable[dict], columns: Sequence[str]) -> str:
    records: List[dict] = [{column: _json_value(row.get(column)) for column in columns} for row in rows]
    return json.dumps(records, indent=2) + "\n"


def write_table(rows: Iterable[dict], columns: Sequence[str], out: Optional[str] = None, fmt: str = "csv") -> str:
    """Renders rows as CSV or JSON and writes them to `out`, or stdout when out is None."""
    rows = list(rows)
    text = render_json(rows, columns) if fmt == "json" else render_csv(rows, columns)
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, 'w', newline='') as f:
            f.write(text)
    return text


def point_columns(n: int, prefix: str = "x") -> List[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]
