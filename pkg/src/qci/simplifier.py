from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from .filter import FilteredIdentitySet, expand_grouped
from .gates import IDENTITY_TOKEN, LAMBDA, GateKind, GateToken, Identity, SignedWord, eval_word, token_matrix
from .rules import base_normal_form, merge_phases
from .utils.trace import SimplifyTrace
from .utils.unitary import ExactUnitary

logger = logging.getLogger(__name__)

REDUCE = "reduce"
EXPAND = "expand"


class RewriteError(ValueError):
    pass


def _split_phase(word: SignedWord) -> Tuple[int, Tuple[GateToken, ...]]:
    total = sum(t.subscript for t in word.tokens if t.kind is GateKind.PH)
    core = tuple(t for t in word.tokens if t.kind is not GateKind.PH)
    return total % 8, core


def apply_identity(
    word: SignedWord, identity: Identity, pos: int, direction: str = REDUCE
) -> SignedWord:
    """Substitute one side of ``identity`` for the other at ``pos``.

    Reducing replaces the phase-free part of the rhs by the lhs and moves the
    rhs phase, inverted, to the front of the word. Expanding replaces the lhs
    token (or inserts, when the lhs is I) with the rhs.
    """
    if identity.grouped:
        raise RewriteError(f"Expand grouped identity '{identity}' before applying it")
    tokens = word.tokens
    if direction == REDUCE:
        phase, core = _split_phase(identity.rhs)
        if not core or tokens[pos:pos + len(core)] != core:
            raise RewriteError(f"'{identity}' does not match '{word}' at position {pos}")
        head = (GateToken(GateKind.PH, (8 - phase) % 8),) if phase else ()
        middle = () if identity.lhs == IDENTITY_TOKEN else (identity.lhs,)
        result = SignedWord(
            word.sign * identity.rhs.sign,
            head + tokens[:pos] + middle + tokens[pos + len(core):],
        )
        return merge_phases(result) if phase else result
    if direction == EXPAND:
        if identity.lhs == IDENTITY_TOKEN:
            if not 0 <= pos <= len(tokens):
                raise RewriteError(f"Position {pos} is outside '{word}'")
            rest = tokens[pos:]
        elif pos < len(tokens) and tokens[pos] == identity.lhs:
            rest = tokens[pos + 1:]
        else:
            raise RewriteError(f"'{identity.lhs}' does not occur in '{word}' at position {pos}")
        return SignedWord(word.sign * identity.rhs.sign, tokens[:pos] + identity.rhs.tokens + rest)
    raise ValueError(f"Unknown direction '{direction}', expected '{REDUCE}' or '{EXPAND}'")


@dataclass(frozen=True)
class _Candidate:
    order: int
    identity: Identity


@lru_cache(maxsize=1)
def _gate_values() -> Dict[ExactUnitary, Tuple[int, Optional[GateToken]]]:
    """Exact value -> (sign, gate) for every +-lambda; +-I map to the empty word."""
    identity = token_matrix(IDENTITY_TOKEN)
    table: Dict[ExactUnitary, Tuple[int, Optional[GateToken]]] = {identity: (1, None), -identity: (-1, None)}
    for token in LAMBDA:
        table.setdefault(token_matrix(token), (1, token))
    for token in LAMBDA:
        table.setdefault(-token_matrix(token), (-1, token))
    return table


class Simplifier:
    """Greedy peephole pass over an identity database.

    When no database identity shortens the word, any window of at most
    ``window`` gates whose exact value is a single gate (up to sign) is
    replaced by that gate.
    """

    def __init__(self, db: FilteredIdentitySet | Iterable[Identity], window: int = 3):
        if window < 2:
            raise ValueError(f"Lookup window must be at least 2, got {window}")
        self.window = window
        self.index: Dict[Tuple[GateToken, ...], List[_Candidate]] = {}
        order = 0
        for identity in db:
            for instance in expand_grouped(identity):
                _, core = _split_phase(instance.rhs)
                if core:
                    self.index.setdefault(core, []).append(_Candidate(order, instance))
                    order += 1
        self.widths = sorted({len(core) for core in self.index}, reverse=True)

    def _best_reduction(self, word: SignedWord) -> Optional[Tuple[Identity, int, SignedWord]]:
        # longest match first, then leftmost, then database order
        for width in self.widths:
            for pos in range(len(word) - width + 1):
                for candidate in self.index.get(word.tokens[pos:pos + width], ()):
                    applied = apply_identity(word, candidate.identity, pos)
                    if len(base_normal_form(applied)) < len(word):
                        return candidate.identity, pos, applied
        return None

    def _gate_lookup(self, word: SignedWord) -> Optional[Tuple[Identity, int, SignedWord]]:
        tokens, values = word.tokens, _gate_values()
        for width in range(min(self.window, len(tokens)), 1, -1):
            for pos in range(len(tokens) - width + 1):
                core = tokens[pos:pos + width]
                found = values.get(eval_word(SignedWord(1, core)))
                if found is None:
                    continue
                sign, gate = found
                middle = (gate,) if gate is not None else ()
                applied = SignedWord(word.sign * sign, tokens[:pos] + middle + tokens[pos + width:])
                return Identity(gate or IDENTITY_TOKEN, SignedWord(sign, core)), pos, applied
        return None

    def simplify(self, word: SignedWord) -> Tuple[SignedWord, SimplifyTrace]:
        trace = SimplifyTrace()
        while True:
            normal = base_normal_form(word)
            if normal != word:
                trace.add("normal form", 0, word, normal)
                word = normal
            found = self._best_reduction(word) or self._gate_lookup(word)
            if found is None:
                return word, trace
            identity, pos, applied = found
            logger.debug("%s: apply '%s' at %d", word, identity, pos)
            trace.add(str(identity), pos, word, applied)
            word = applied


def simplify(word: SignedWord, db: FilteredIdentitySet | Simplifier) -> Tuple[SignedWord, SimplifyTrace]:
    simplifier = db if isinstance(db, Simplifier) else Simplifier(db)
    return simplifier.simplify(word)
