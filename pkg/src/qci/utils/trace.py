from __future__ import annotations

from typing import Any, Dict, Iterator, List, Tuple, Union

import numpy as np
import pandas as pd

COLUMNS = ("rule", "position", "before", "after")


class SimplifyTrace:
    """Ordered record of rewrite applications, one row per step."""

    def __init__(self, max_size: int = 256):
        self.max_size = max_size
        self.columns: List[str] = list(COLUMNS)
        self.storage: np.ndarray = np.empty((max_size, len(self.columns)), dtype="O")
        self.size: int = 0

    def add(self, rule: str, position: int, before: Any, after: Any) -> None:
        if self.size >= len(self.storage):
            grown = np.empty((2 * len(self.storage), len(self.columns)), dtype="O")
            grown[: self.size] = self.storage[: self.size]
            self.storage = grown
        self.storage[self.size, :] = (rule, position, before, after)
        self.size += 1

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Dict[str, Any]]:
        for t in range(self.size):
            yield self[t]

    def __getitem__(
        self, arg: Union[str, int, Tuple[str, int]]
    ) -> Union[Any, Dict[str, Any], np.ndarray]:
        data = self.storage[: self.size]
        if isinstance(arg, tuple):
            column, t = arg
            return data[t, self._get_column_index(column)]
        if isinstance(arg, str):
            return data[:, self._get_column_index(arg)]
        if isinstance(arg, int):
            return dict(zip(self.columns, data[arg]))
        raise TypeError(f"Invalid argument type: {type(arg)}")

    def _get_column_index(self, column: str) -> int:
        try:
            return self.columns.index(column)
        except ValueError:
            raise ValueError(
                f"Column '{column}' does not exist. Available columns: {self.columns}"
            )

    def to_df(self) -> pd.DataFrame:
        df = pd.DataFrame(self.storage[: self.size], columns=self.columns)
        df["before"] = df["before"].map(str)
        df["after"] = df["after"].map(str)
        return df

    def render(self) -> str:
        """Arrow notation: ``H X H --[Y3 = - H X]--> - Y3 H --[Z = - Y3 H]--> Z``."""
        if not self.size:
            return ""
        parts = [str(self["before", 0])]
        for step in self:
            parts.append(f"--[{step['rule']}]-->")
            parts.append(str(step["after"]))
        return "  ".join(parts)
