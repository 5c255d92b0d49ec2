"""Base rewrite rules on gate words: negate, clean, phase merge, collapse and normalize."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .gates import LAMBDA, GateKind, GateToken, SignedWord

RULE_CLASSES = ("negate", "phase", "normalize", "collapse")
_COLLAPSIBLE = (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PH)
_PAULI_TO_ROTATION = {GateKind.X: GateKind.RX, GateKind.Y: GateKind.RY, GateKind.Z: GateKind.RZ}
_DIAGONAL_SWAPS = {
    (GateKind.T, GateKind.Z),
    (GateKind.S, GateKind.Z),
    (GateKind.S, GateKind.T),
}

Factor = Tuple[int, Optional[GateToken]]


@dataclass(frozen=True, slots=True)
class RewriteRule:
    pattern: Tuple[GateToken, ...]
    replacement: SignedWord
    rule_class: str

    def __post_init__(self):
        if self.rule_class not in RULE_CLASSES:
            raise ValueError(f"Unknown rule class '{self.rule_class}'")

    def __str__(self) -> str:
        lhs = " ".join(str(t) for t in self.pattern)
        rhs = str(self.replacement) if self.replacement.tokens else ("- I" if self.replacement.sign < 0 else "")
        return f"{lhs} -> {rhs}".rstrip()


def is_half_turn(token: GateToken) -> bool:
    return token.kind in _COLLAPSIBLE and token.subscript == 4


def negate_token(token: GateToken, keep_half_turns: bool = False) -> Factor:
    """Rewrite Q_j (j >= 5) to -Q_(j-4); Q_4 to -I unless half-turns are kept; Q_0 to I."""
    if token.kind not in _COLLAPSIBLE:
        return 1, token
    j = token.subscript
    if j == 0:
        return 1, None
    if j > 4:
        return -1, token.with_subscript(j - 4)
    if j == 4 and not keep_half_turns:
        return -1, None
    return 1, token


def flag_negations(word: SignedWord, keep_half_turns: bool = False) -> Tuple[int, List[Factor]]:
    return word.sign, [negate_token(t, keep_half_turns) for t in word.tokens]


def step_clean(factors: Sequence[Factor], sign: int = 1) -> SignedWord:
    """Multiply per-factor signs into one leading sign; None factors stand for the identity."""
    tokens = []
    for factor_sign, token in factors:
        sign *= factor_sign
        if token is not None:
            tokens.append(token)
    return SignedWord(sign, tuple(tokens))


def step_negate(word: SignedWord, keep_half_turns: bool = False) -> SignedWord:
    sign, factors = flag_negations(word, keep_half_turns)
    return step_clean(factors, sign)


def merge_phases(word: SignedWord, keep_half_turns: bool = False) -> SignedWord:
    """Commute every P_j to the front and merge them into at most one phase token.

    Only a lone P4 may stay a half-turn; a P4 produced by merging is a sign.
    """
    total, merged, rest = 0, 0, []
    for token in word.tokens:
        if token.kind is GateKind.PH:
            total += token.subscript
            merged += 1
        else:
            rest.append(token)
    keep = keep_half_turns and merged == 1
    sign, phase = negate_token(GateToken(GateKind.PH, total % 8), keep)
    head = (phase,) if phase is not None else ()
    return SignedWord(word.sign * sign, head + tuple(rest))


def commutes_left(a: GateToken, b: GateToken) -> bool:
    """True when the commuting schema rewrites the adjacent pair ``a b`` to ``b a``."""
    if _PAULI_TO_ROTATION.get(a.kind) is b.kind:
        return True
    if (a.kind, b.kind) in _DIAGONAL_SWAPS:
        return True
    if a.kind in (GateKind.S, GateKind.T) and b.kind is GateKind.RZ:
        return True
    if is_half_turn(b):
        return a.kind not in (GateKind.I, GateKind.PH) and not is_half_turn(a)
    return False


def _collapse_at(tokens: List[GateToken]) -> Optional[int]:
    for i in range(len(tokens) - 1):
        a, b = tokens[i], tokens[i + 1]
        if a.kind is b.kind and a.kind in _COLLAPSIBLE:
            return i
    return None


def _commute_at(tokens: List[GateToken]) -> Optional[int]:
    for i in range(len(tokens) - 1):
        if commutes_left(tokens[i], tokens[i + 1]):
            return i
    return None


def _rewrite(word: SignedWord, keep_half_turns: bool, commute: bool) -> SignedWord:
    word = step_negate(word, keep_half_turns)
    sign, tokens = word.sign, list(word.tokens)
    while True:
        if any(t.kind is GateKind.I for t in tokens):
            tokens = [t for t in tokens if t.kind is not GateKind.I]
            continue
        i = _collapse_at(tokens)
        if i is not None:
            a, b = tokens[i], tokens[i + 1]
            merged_sign, merged = negate_token(
                a.with_subscript((a.subscript + b.subscript) % 8), keep_half_turns
            )
            sign *= merged_sign
            tokens[i:i + 2] = [merged] if merged is not None else []
            continue
        if commute:
            i = _commute_at(tokens)
            if i is not None:
                tokens[i], tokens[i + 1] = tokens[i + 1], tokens[i]
                continue
        break
    return SignedWord(sign, tuple(tokens))


def step_collapse(word: SignedWord, keep_half_turns: bool = False) -> SignedWord:
    return _rewrite(word, keep_half_turns, commute=False)


def step_normalize(word: SignedWord, keep_half_turns: bool = False) -> SignedWord:
    """Fixpoint of I-removal, collapse and the commuting schema, leftmost match first.

    Every commuting swap moves a token of lower rank (half-turn < rotation <
    Pauli < T < S < H) left past one of higher rank, so the inversion count
    drops and the loop terminates.
    """
    return _rewrite(word, keep_half_turns, commute=True)


def base_normal_form(word: SignedWord, keep_half_turns: bool = False) -> SignedWord:
    while True:
        reduced = step_negate(word, keep_half_turns)
        reduced = merge_phases(reduced, keep_half_turns)
        reduced = step_normalize(reduced, keep_half_turns)
        if reduced == word:
            return reduced
        word = reduced


def instantiate_rules(keep_half_turns: bool = False) -> Dict[str, List[RewriteRule]]:
    """Every instance of the negate, phase, normalize and collapse schemas over the gate set."""
    rules: Dict[str, List[RewriteRule]] = {name: [] for name in RULE_CLASSES}
    subscripted = [t for t in LAMBDA if t.kind in _COLLAPSIBLE]

    for token in subscripted:
        if token.subscript > 4 or (token.subscript == 4 and not keep_half_turns):
            rules["negate"].append(
                RewriteRule((token,), step_negate(SignedWord(1, (token,)), keep_half_turns), "negate")
            )

    for a in subscripted:
        for b in subscripted:
            if a.kind is b.kind:
                k = (a.subscript + b.subscript) % 8
                tokens = (a.with_subscript(k),) if k else ()
                rules["collapse"].append(RewriteRule((a, b), SignedWord(1, tokens), "collapse"))

    for v in LAMBDA:
        for p in LAMBDA:
            if p.kind is GateKind.PH and v.kind is not GateKind.PH:
                rules["phase"].append(RewriteRule((v, p), SignedWord(1, (p, v)), "phase"))

    identity = LAMBDA[0]
    rules["normalize"].append(RewriteRule((identity, identity), SignedWord(1, (identity,)), "normalize"))
    rules["normalize"].append(RewriteRule((identity,), SignedWord(1, ()), "normalize"))
    for a in LAMBDA:
        for b in LAMBDA:
            if commutes_left(a, b):
                rules["normalize"].append(RewriteRule((a, b), SignedWord(1, (b, a)), "normalize"))
    return rules
