"""
Tabular experiment results with pandas serialization.

Each result kind has a fixed, documented column order so CSV artifacts are
stable across runs. Tables can be saved, reloaded and summarized.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from .exceptions import FileOperationError, ValidationError

# Type aliases
ResultRow = Dict[str, Any]


class ResultsTable:
    """
    Experiment rows of one kind backed by a pandas DataFrame.

    Rows are validated against the kind's columns; missing columns are
    filled with None and unknown columns are rejected.
    """

    COLUMNS: Dict[str, List[str]] = {
        "ghz": [
            "graph", "N", "alpha", "p0", "start", "trials", "mean", "std",
            "prediction", "bound_lo", "bound_hi", "seed",
        ],
        "placement": [
            "graph", "N", "qubits", "gates", "seed", "cost", "naive_cost", "ratio", "strategy",
        ],
    }

    def __init__(self, kind: str, results_file: Optional[str] = None, auto_save: bool = False):
        if kind not in self.COLUMNS:
            raise ValidationError(kind, "Unknown result kind", ", ".join(self.COLUMNS))
        self.kind = kind
        self.columns = list(self.COLUMNS[kind])
        self.results_file = results_file
        self.auto_save = auto_save
        self._frame = pd.DataFrame(columns=self.columns)
        if results_file and Path(results_file).exists():
            self.load()

    def add_row(self, row: ResultRow) -> None:
        """
        Append one row.

        Raises:
            ValidationError: If the row has columns this kind does not define
        """
        unknown = set(row) - set(self.columns)
        if unknown:
            raise ValidationError(sorted(unknown), f"Unknown columns for '{self.kind}' results", ", ".join(self.columns))
        self._frame.loc[len(self._frame)] = [row.get(column) for column in self.columns]
        if self.auto_save and self.results_file:
            self.save()

    def to_frame(self) -> pd.DataFrame:
        return self._frame.copy()

    def to_csv(self) -> str:
        return self._frame.to_csv(index=False)

    def save(self, file_path: Optional[str] = None) -> None:
        target = file_path or self.results_file
        if not target:
            raise FileOperationError("", "write", "no results file configured")
        try:
            Path(target).parent.mkdir(parents=True, exist_ok=True)
            self._frame.to_csv(target, index=False)
        except OSError as e:
            raise FileOperationError(target, "write", str(e))

    def load(self, file_path: Optional[str] = None) -> None:
        """
        Raises:
            FileOperationError: If the file is unreadable or its columns do not match
        """
        source = file_path or self.results_file
        try:
            frame = pd.read_csv(source)
        except pd.errors.EmptyDataError:
            frame = pd.DataFrame(columns=self.columns)
        except (OSError, pd.errors.ParserError) as e:
            raise FileOperationError(str(source), "read", str(e))
        if list(frame.columns) != self.columns:
            raise FileOperationError(str(source), "parse", f"expected columns {self.columns}")
        self._frame = frame

    def summary(self, column: str) -> Dict[str, float]:
        """Count, mean, std, min and max of a numeric column."""
        if column not in self.columns:
            raise ValidationError(column, f"Unknown column for '{self.kind}' results")
        values = pd.to_numeric(self._frame[column], errors="coerce").dropna()
        if values.empty:
            return {"count": 0}
        return {
            "count": int(values.count()),
            "mean": float(values.mean()),
            "std": float(values.std(ddof=0)),
            "min": float(values.min()),
            "max": float(values.max()),
        }

    def __len__(self) -> int:
        return len(self._frame)
