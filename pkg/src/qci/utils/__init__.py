from __future__ import annotations

from .cyclo import CycloNum, cyclo_canonicalize
from .trace import SimplifyTrace
from .unitary import ExactUnitary

__all__ = [
    "CycloNum",
    "ExactUnitary",
    "SimplifyTrace",
    "cyclo_canonicalize",
]
