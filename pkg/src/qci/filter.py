from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import pandas as pd

from .gates import (
    AXES,
    DEFAULT_TOLERANCE,
    IDENTITY_TOKEN,
    PAULI_OF,
    PATTERN_AXES,
    ROTATION_OF,
    GateKind,
    GateToken,
    Identity,
    SignedWord,
)
from .miner import RawIdentitySet, count_table, mine
from .rules import flag_negations, merge_phases, negate_token, step_clean, step_collapse, step_normalize

logger = logging.getLogger(__name__)

_ROTATION_KINDS = frozenset({GateKind.I, GateKind.RX, GateKind.RY, GateKind.RZ})
_GROUPABLE_KINDS = frozenset(
    {GateKind.I, GateKind.X, GateKind.Y, GateKind.Z, GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PH}
)

Record = Tuple[Identity, Tuple[str, ...]]


@dataclass(frozen=True)
class FilterConfig:
    enable_drop_rotations: bool = True
    enable_grouping: bool = True
    eps: float = DEFAULT_TOLERANCE
    # X4 = Y4 = Z4 = P4 = -I stay spelled as half-turns at length 1 only
    keep_half_turns: bool = True
    # orbits carrying a P2 phase list their Y and Z members next to the A/B/C form
    keep_phase_orbit_members: bool = True

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"Tolerance must be positive, got {self.eps}")

    @classmethod
    def keep_rotations(cls) -> FilterConfig:
        return cls(enable_drop_rotations=False, enable_grouping=False)

    @classmethod
    def drop_rotations(cls) -> FilterConfig:
        return cls(enable_drop_rotations=True, enable_grouping=False)

    @classmethod
    def all_filtering(cls) -> FilterConfig:
        return cls(enable_drop_rotations=True, enable_grouping=True)


PRESETS: Dict[str, FilterConfig] = {
    "Keep rots, No groups": FilterConfig.keep_rotations(),
    "Drop rots, No groups": FilterConfig.drop_rotations(),
    "All filtering": FilterConfig.all_filtering(),
}


@dataclass
class FilteredIdentitySet:
    identities: List[Identity] = field(default_factory=list)
    provenance: List[Tuple[str, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.identities)

    def __iter__(self) -> Iterator[Identity]:
        return iter(self.identities)

    def by_length(self) -> Dict[int, List[Identity]]:
        groups: Dict[int, List[Identity]] = {}
        for identity in self.identities:
            groups.setdefault(identity.mined_length, []).append(identity)
        return dict(sorted(groups.items()))

    @property
    def counts_by_length(self) -> Dict[int, int]:
        return {n: len(group) for n, group in self.by_length().items()}

    def cumulative_counts(self, max_len: Optional[int] = None) -> Tuple[int, ...]:
        counts = self.counts_by_length
        max_len = max_len if max_len is not None else max(counts, default=0)
        total, out = 0, []
        for n in range(1, max_len + 1):
            total += counts.get(n, 0)
            out.append(total)
        return tuple(out)

    def expanded(self) -> List[Identity]:
        return [instance for identity in self.identities for instance in expand_grouped(identity)]


class ShrinkIndex:
    """Words known to equal a single gate, looked up as contiguous sub-words.

    Only unsigned right-hand sides count: ``X = - H Y3`` says H Y3 is -X,
    which is no gate, so it cannot shorten a word on its own.
    """

    def __init__(self, identities: Iterable[Identity] = ()):
        self.patterns: Set[Tuple[GateToken, ...]] = set()
        self.widths: Set[int] = set()
        self.add(identities)

    def add(self, identities: Iterable[Identity]) -> None:
        for identity in identities:
            for instance in expand_grouped(identity):
                tokens = instance.rhs.tokens
                if tokens and instance.rhs.sign > 0:
                    self.patterns.add(tokens)
                    self.widths.add(len(tokens))

    def occurs_in(self, tokens: Sequence[GateToken]) -> bool:
        tokens = tuple(tokens)
        for width in self.widths:
            for start in range(len(tokens) - width + 1):
                if tokens[start:start + width] in self.patterns:
                    return True
        return False


def step_shrink(identity: Identity, shorter: ShrinkIndex | Iterable[Identity]) -> bool:
    """Keep (True) unless a shorter identity's rhs occurs inside this rhs."""
    if identity.mined_length < 3:
        return True
    if not isinstance(shorter, ShrinkIndex):
        shorter = ShrinkIndex(
            s for s in shorter if 2 <= s.mined_length < identity.mined_length
        )
    return not shorter.occurs_in(identity.rhs.tokens)


def step_negate_identity(identity: Identity, keep_half_turns: bool = True) -> Tuple[Identity, bool]:
    """Negate both sides; a sign produced on the lhs moves to the rhs.

    Returns the identity after the clean step and whether any factor was rewritten.
    """
    lhs_sign, lhs = negate_token(identity.lhs, keep_half_turns)
    sign, factors = flag_negations(identity.rhs, keep_half_turns)
    touched = lhs != identity.lhs or any(s < 0 or t is None for s, t in factors)
    rhs = step_clean(factors, sign * lhs_sign)
    return replace(identity, lhs=lhs or IDENTITY_TOKEN, rhs=rhs), touched


def step_phase(identity: Identity, keep_half_turns: bool = True) -> Identity:
    lhs, rhs = identity.lhs, identity.rhs
    if lhs.kind is GateKind.PH:
        inverse = lhs.with_subscript((8 - lhs.subscript) % 8)
        rhs = SignedWord(rhs.sign, (inverse,) + rhs.tokens)
        lhs = IDENTITY_TOKEN
    return replace(identity, lhs=lhs, rhs=merge_phases(rhs, keep_half_turns))


def is_trivial(identity: Identity) -> bool:
    rhs = identity.rhs
    if rhs.sign < 0:
        return False
    if rhs.tokens == (identity.lhs,):
        return True
    return identity.lhs == IDENTITY_TOKEN and rhs.tokens in ((), (IDENTITY_TOKEN,))


def step_merge(
    records: Sequence[Record] | Sequence[Identity], seen: Iterable[Identity] = ()
) -> List:
    """Drop vacuous identities and duplicates (also of anything in ``seen``), canonical order."""
    plain = bool(records) and isinstance(records[0], Identity)
    items: List[Record] = [(r, ()) for r in records] if plain else list(records)
    known = set(seen)
    out = []
    for identity, steps in sorted(items, key=lambda r: r[0].sort_key):
        if is_trivial(identity) or identity in known:
            continue
        known.add(identity)
        out.append((identity, steps))
    return [identity for identity, _ in out] if plain else out


def step_drop_rotations(identity: Identity) -> bool:
    """Keep (True) unless every token on both sides is a rotation or I."""
    return not all(token.kind in _ROTATION_KINDS for token in identity.tokens())


def _filter_pass(records: List[Record], index: ShrinkIndex, seen: Set[Identity], keep: bool) -> List[Record]:
    out: List[Record] = []
    for identity, steps in records:
        if not step_shrink(identity, index):
            continue
        trail = list(steps)

        negated, touched = step_negate_identity(identity, keep)
        if touched:
            trail.append("negate")
        if negated.rhs.sign != identity.rhs.sign:
            trail.append("clean")
        current = negated

        for name, step in (
            ("phase", lambda i: step_phase(i, keep)),
            ("normalize", lambda i: replace(i, rhs=step_normalize(i.rhs, keep))),
            ("collapse", lambda i: replace(i, rhs=step_collapse(i.rhs, keep))),
        ):
            after = step(current)
            if after != current:
                trail.append(name)
            current = after
        out.append((current, tuple(trail)))

    return step_merge(out, seen)


def filter_fixpoint(raw: RawIdentitySet, cfg: FilterConfig = FilterConfig()) -> FilteredIdentitySet:
    """Filter every length to a stable list, then drop rotations and group.

    Shrinking looks for sub-words that equal a gate outright, i.e. the mined
    words of every shorter length, so it does not depend on the switches.
    Dropping rotations only removes identities from the stable lists.
    """
    lengths = raw.lengths
    if lengths != list(range(1, len(lengths) + 1)):
        raise ValueError(f"Filtering needs contiguous lengths starting at 1, got {lengths}")

    index = ShrinkIndex()
    seen: Set[Identity] = set()
    stable: Dict[int, List[Record]] = {}
    for n in lengths:
        keep = cfg.keep_half_turns and n == 1
        records: List[Record] = [(identity, ()) for identity in raw.iter_identities(n)]
        passes = 0
        while True:
            passes += 1
            updated = _filter_pass(records, index, seen, keep)
            logger.info("Length %d pass %d: %d -> %d identities", n, passes, len(records), len(updated))
            if [i for i, _ in updated] == [i for i, _ in records]:
                break
            records = updated
        stable[n] = records
        seen.update(identity for identity, _ in records)
        if n >= 2:
            index.add(raw.iter_identities(n))

    result = FilteredIdentitySet()
    for n, records in stable.items():
        if cfg.enable_drop_rotations:
            records = [(i, s) for i, s in records if step_drop_rotations(i)]
        if cfg.enable_grouping:
            records = group_cyclic(records, cfg.keep_phase_orbit_members)
        for identity, steps in records:
            result.identities.append(identity)
            result.provenance.append(steps)
    return result


def rotate_token(token: GateToken, shift: int) -> GateToken:
    axis = token.axis
    if axis not in AXES:
        return token
    target = AXES[(AXES.index(axis) + shift) % 3]
    if token.kind.is_subscripted:
        return GateToken(ROTATION_OF[target], token.subscript)
    return GateToken(PAULI_OF[target])


def rotate_identity(identity: Identity, shift: int) -> Identity:
    rhs = SignedWord(identity.rhs.sign, tuple(rotate_token(t, shift) for t in identity.rhs.tokens))
    return replace(identity, lhs=rotate_token(identity.lhs, shift), rhs=rhs)


def _anchor_axis(identity: Identity) -> Optional[str]:
    for token in identity.tokens():
        if token.axis in AXES:
            return token.axis
    return None


def _is_groupable(identity: Identity) -> bool:
    return (
        not identity.grouped
        and all(t.kind in _GROUPABLE_KINDS for t in identity.tokens())
        and _anchor_axis(identity) is not None
    )


def _substitute(token: GateToken, mapping: Dict[str, str]) -> GateToken:
    axis = token.axis
    if axis not in mapping:
        return token
    target = mapping[axis]
    if token.kind.is_subscripted:
        return GateToken(ROTATION_OF[target], token.subscript)
    return GateToken(PAULI_OF[target])


def _map_identity(identity: Identity, mapping: Dict[str, str], grouped: bool) -> Identity:
    rhs = SignedWord(identity.rhs.sign, tuple(_substitute(t, mapping) for t in identity.rhs.tokens))
    return replace(identity, lhs=_substitute(identity.lhs, mapping), rhs=rhs, grouped=grouped)


def expand_grouped(identity: Identity) -> Tuple[Identity, ...]:
    """The three concrete identities a grouped A/B/C identity stands for."""
    if not identity.grouped:
        return (identity,)
    return tuple(
        _map_identity(
            identity,
            {pattern: AXES[(shift + i) % 3] for i, pattern in enumerate(PATTERN_AXES)},
            grouped=False,
        )
        for shift in range(3)
    )


def _has_quarter_phase(identity: Identity) -> bool:
    return any(t.kind is GateKind.PH and t.subscript % 4 == 2 for t in identity.rhs.tokens)


def group_cyclic(records: Sequence[Record] | Sequence[Identity], keep_phase_members: bool = False) -> List:
    """Replace each complete cyclic X->Y->Z orbit by one A/B/C identity.

    With ``keep_phase_members`` an orbit whose rhs carries a P2 phase only
    gives up its X member; the Y and Z members stay listed.
    """
    plain = bool(records) and isinstance(records[0], Identity)
    items: List[Record] = [(r, ()) for r in records] if plain else list(records)
    steps_of = dict(items)
    handled: Set[Identity] = set()
    out: List[Record] = []
    for identity, steps in sorted(items, key=lambda r: r[0].sort_key):
        if identity in handled:
            continue
        if _is_groupable(identity):
            orbit = [identity, rotate_identity(identity, 1), rotate_identity(identity, 2)]
            if len(set(orbit)) == 3 and all(o in steps_of and o not in handled for o in orbit):
                handled.update(orbit)
                base = next(o for o in orbit if _anchor_axis(o) == "X")
                mapping = dict(zip(AXES, PATTERN_AXES))
                out.append((_map_identity(base, mapping, grouped=True), steps_of[base] + ("group",)))
                if keep_phase_members and _has_quarter_phase(base):
                    out.extend((o, steps_of[o]) for o in orbit if o != base)
                continue
        out.append((identity, steps))
    out.sort(key=lambda r: r[0].sort_key)
    return [identity for identity, _ in out] if plain else out


def filter_count_table(raw: RawIdentitySet, max_len: Optional[int] = None) -> pd.DataFrame:
    """All four rows of the identity-count table for one mined set."""
    base = count_table(raw, max_len)
    rows = {"No filtering": list(base["cumulative"])}
    for name, cfg in PRESETS.items():
        filtered = filter_fixpoint(raw, cfg)
        rows[name] = list(filtered.cumulative_counts(len(base)))
    return pd.DataFrame.from_dict(rows, orient="index", columns=list(base.index))


def build_database(
    max_len: int = 3, cfg: FilterConfig = FilterConfig(), workers: int = 1
) -> FilteredIdentitySet:
    return filter_fixpoint(mine(max_len, cfg.eps, workers=workers), cfg)
