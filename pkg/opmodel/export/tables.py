from __future__ import annotations

from pathlib import Path

import pandas as pd


def write_table_csv(path: Path, table: pd.DataFrame) -> Path:
    """
    Write the main table of a report (Betti numbers, stage log, ...) as CSV.

    Parameters:
        path: Output CSV path
        table: DataFrame to write; list-valued cells are joined with spaces
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    df = table.copy()
    for column in df.columns:
        if df[column].map(lambda v: isinstance(v, (list, tuple))).any():
            df[column] = df[column].map(lambda v: " ".join(str(x) for x in v) if isinstance(v, (list, tuple)) else v)

    df.to_csv(path, index=False)
    return path


def flags_table(flags: dict) -> pd.DataFrame:
    """One row per flag of a classification, with its category."""
    rows = []
    for key, value in flags.items():
        if isinstance(value, dict):
            continue
        # Categorize flags
        if key in ("weak_equivalence", "fibration", "cofibration"):
            category = "model"
        elif key.endswith("_wrt"):
            category = "relative"
        else:
            category = "other"

        rows.append(
            {
                "category": category,
                "flag": key,
                "value": value,
            }
        )

    return pd.DataFrame(rows, columns=["category", "flag", "value"])


def dims_table(dims: dict[str, tuple[int, ...]]) -> pd.DataFrame:
    """Dimensions per degree, one column per named complex."""
    depth = max((len(d) for d in dims.values()), default=0)
    data = {"degree": list(range(1, depth + 1))}
    for name, values in dims.items():
        data[name] = list(values) + [0] * (depth - len(values))
    return pd.DataFrame(data)
