from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .cyclo import CycloNum

Entries = Tuple[CycloNum, CycloNum, CycloNum, CycloNum]


@dataclass(frozen=True, slots=True)
class ExactUnitary:
    """2x2 matrix over the cyclotomic ring, entries stored row-major."""

    entries: Entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | CycloNum]]) -> ExactUnitary:
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise ValueError(f"Expected a 2x2 matrix, got {rows!r}")
        flat = [
            value if isinstance(value, CycloNum) else CycloNum.from_int(value)
            for row in rows
            for value in row
        ]
        return cls(tuple(flat))

    @classmethod
    def identity(cls) -> ExactUnitary:
        return cls.from_rows([[1, 0], [0, 1]])

    @classmethod
    def scalar(cls, value: CycloNum) -> ExactUnitary:
        zero = CycloNum.from_int(0)
        return cls((value, zero, zero, value))

    def __getitem__(self, index: Tuple[int, int]) -> CycloNum:
        row, col = index
        return self.entries[2 * row + col]

    def __matmul__(self, other: ExactUnitary) -> ExactUnitary:
        if not isinstance(other, ExactUnitary):
            return NotImplemented
        a00, a01, a10, a11 = self.entries
        b00, b01, b10, b11 = other.entries
        return ExactUnitary(
            (
                a00 * b00 + a01 * b10,
                a00 * b01 + a01 * b11,
                a10 * b00 + a11 * b10,
                a10 * b01 + a11 * b11,
            )
        )

    def __add__(self, other: ExactUnitary) -> ExactUnitary:
        if not isinstance(other, ExactUnitary):
            return NotImplemented
        return ExactUnitary(tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> ExactUnitary:
        return ExactUnitary(tuple(-x for x in self.entries))

    def scale(self, factor: int | CycloNum) -> ExactUnitary:
        return ExactUnitary(tuple(x * factor for x in self.entries))

    def dagger(self) -> ExactUnitary:
        a00, a01, a10, a11 = self.entries
        return ExactUnitary((a00.conj(), a10.conj(), a01.conj(), a11.conj()))

    def is_unitary(self) -> bool:
        return self @ self.dagger() == ExactUnitary.identity()

    def to_numpy(self) -> np.ndarray:
        return np.array([x.to_complex() for x in self.entries], dtype=np.complex128).reshape(2, 2)

    def __str__(self) -> str:
        a00, a01, a10, a11 = self.entries
        return f"[[{a00}, {a01}], [{a10}, {a11}]]"
