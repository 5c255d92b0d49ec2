from __future__ import annotations

import io
import json
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from .gates import GateToken, Identity, SignedWord, TokenError, parse_token

FORMATS = ("text", "json", "csv")
_SUFFIX_FORMATS = {".json": "json", ".csv": "csv"}


class IdentityParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.reason = message
        self.column = column


def _scan(text: str, offset: int = 0) -> List[Tuple[str, int]]:
    """Split into (lexeme, 1-based column); a lexeme is '=', '-' or a letter with optional digit."""
    lexemes, i = [], 0
    while i < len(text):
        char = text[i]
        if char.isspace():
            i += 1
            continue
        start = i
        i += 1
        if char.isalpha() and i < len(text) and text[i].isdigit():
            i += 1
        lexemes.append((text[start:i], offset + start + 1))
    return lexemes


def _token(lexeme: str, column: int) -> GateToken:
    try:
        return parse_token(lexeme)
    except TokenError as e:
        raise IdentityParseError(str(e), column) from None


def parse_word(text: str) -> SignedWord:
    lexemes = _scan(text)
    sign = 1
    if lexemes and lexemes[0][0] == "-":
        sign, lexemes = -1, lexemes[1:]
    return SignedWord(sign, tuple(_token(lexeme, column) for lexeme, column in lexemes))


def parse_identity_line(text: str) -> Identity:
    lexemes = _scan(text)
    if not lexemes:
        raise IdentityParseError("empty line", 1)
    equals = [column for lexeme, column in lexemes if lexeme == "="]
    if not equals:
        raise IdentityParseError("missing '='", len(text.rstrip()) + 1)
    if len(lexemes) < 2 or lexemes[1][0] != "=":
        raise IdentityParseError("expected a single gate before '='", lexemes[0][1])

    lhs = _token(*lexemes[0])
    rest = lexemes[2:]
    sign = 1
    if rest and rest[0][0] == "-":
        sign, rest = -1, rest[1:]
    if not rest:
        raise IdentityParseError("empty right-hand side", equals[0] + 1)
    tokens = []
    for lexeme, column in rest:
        if lexeme in ("=", "-"):
            raise IdentityParseError(f"unexpected '{lexeme}'", column)
        tokens.append(_token(lexeme, column))

    grouped = any(t.kind.is_pattern for t in (lhs, *tokens))
    return Identity(lhs=lhs, rhs=SignedWord(sign, tuple(tokens)), grouped=grouped)


def format_identity(identity: Identity) -> str:
    return f"{identity.lhs} = {identity.rhs}"


def _records(identities: Sequence[Identity], provenance: Optional[Sequence[Tuple[str, ...]]]) -> List[dict]:
    records = []
    for i, identity in enumerate(identities):
        record = {
            "lhs": str(identity.lhs),
            "sign": identity.rhs.sign,
            "rhs": [str(t) for t in identity.rhs.tokens],
            "length": identity.mined_length,
            "grouped": identity.grouped,
        }
        if provenance is not None:
            record["steps"] = list(provenance[i])
        records.append(record)
    return records


def export(
    identities: Iterable[Identity],
    fmt: str = "text",
    provenance: Optional[Sequence[Tuple[str, ...]]] = None,
) -> bytes:
    """Serialise in canonical order; identical sets give identical bytes."""
    if fmt not in FORMATS:
        raise ValueError(f"Unknown export format '{fmt}', expected one of {FORMATS}")
    pairs = list(zip(identities, provenance)) if provenance is not None else [(i, None) for i in identities]
    pairs.sort(key=lambda pair: pair[0].sort_key)
    ordered = [identity for identity, _ in pairs]
    steps = [s for _, s in pairs] if provenance is not None else None

    if fmt == "text":
        return "".join(format_identity(i) + "\n" for i in ordered).encode("utf-8")
    records = _records(ordered, steps)
    if fmt == "json":
        return json.dumps(records, indent=None).encode("utf-8")
    df = pd.DataFrame(records, columns=["lhs", "sign", "rhs", "length", "grouped"])
    df["rhs"] = df["rhs"].map(" ".join)
    return df.to_csv(index=False, lineterminator="\n").encode("utf-8")


def format_for(path: Path, fmt: Optional[str] = None) -> str:
    return fmt or _SUFFIX_FORMATS.get(Path(path).suffix.lower(), "text")


def write_identities(
    path: Path,
    identities: Iterable[Identity],
    fmt: Optional[str] = None,
    provenance: Optional[Sequence[Tuple[str, ...]]] = None,
    presorted: bool = False,
) -> int:
    """Write a file; presorted text is streamed line by line. Returns the identity count."""
    path = Path(path)
    fmt = format_for(path, fmt)
    if fmt == "text" and presorted:
        count = 0
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for identity in identities:
                f.write(format_identity(identity) + "\n")
                count += 1
        return count
    identities = list(identities)
    path.write_bytes(export(identities, fmt, provenance))
    return len(identities)


def _identity_from_record(record: dict) -> Identity:
    rhs = SignedWord(int(record["sign"]), tuple(parse_token(t) for t in record["rhs"]))
    lhs = parse_token(record["lhs"])
    return Identity(lhs=lhs, rhs=rhs, grouped=bool(record["grouped"]), origin_length=int(record["length"]))


def read_identities(path: Path, fmt: Optional[str] = None) -> List[Identity]:
    path = Path(path)
    fmt = format_for(path, fmt)
    if fmt == "json":
        return [_identity_from_record(r) for r in json.loads(path.read_text(encoding="utf-8"))]
    if fmt == "csv":
        df = pd.read_csv(path, dtype={"rhs": str}, keep_default_na=False)
        df["rhs"] = df["rhs"].str.split()
        return [_identity_from_record(r) for r in df.to_dict("records")]
    return list(iter_text_identities(path.read_text(encoding="utf-8")))


def iter_text_identities(text: str):
    for number, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            yield parse_identity_line(line.rstrip("\n"))
        except IdentityParseError as e:
            raise IdentityParseError(f"line {number}: {e.reason}", e.column) from None
