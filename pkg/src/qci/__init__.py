from __future__ import annotations

from .filter import FilterConfig, FilteredIdentitySet, build_database, filter_fixpoint, group_cyclic
from .gates import (
    LAMBDA,
    GateKind,
    GateToken,
    Identity,
    SignedWord,
    approx_equal,
    eval_word,
    eval_word_float,
    exact_equal,
    parse_token,
    token_matrix,
)
from .miner import RawIdentitySet, count_table, mine
from .simplifier import Simplifier, apply_identity, simplify

__all__ = [
    "LAMBDA",
    "FilterConfig",
    "FilteredIdentitySet",
    "GateKind",
    "GateToken",
    "Identity",
    "RawIdentitySet",
    "SignedWord",
    "Simplifier",
    "apply_identity",
    "approx_equal",
    "build_database",
    "count_table",
    "eval_word",
    "eval_word_float",
    "exact_equal",
    "filter_fixpoint",
    "group_cyclic",
    "mine",
    "parse_token",
    "simplify",
    "token_matrix",
]
