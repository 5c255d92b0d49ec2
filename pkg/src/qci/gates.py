from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .utils.cyclo import CycloNum
from .utils.unitary import ExactUnitary

DEFAULT_TOLERANCE = 1e-9
AXES = ("X", "Y", "Z")
PATTERN_AXES = ("A", "B", "C")


class TokenError(ValueError):
    pass


class GateKind(Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    S = "S"
    T = "T"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    PH = "PH"
    # grouped pattern axes
    A = "A"
    B = "B"
    C = "C"
    RA = "RA"
    RB = "RB"
    RC = "RC"

    @property
    def letter(self) -> str:
        return "P" if self is GateKind.PH else self.value[-1]

    @property
    def is_subscripted(self) -> bool:
        return self in _SUBSCRIPTED

    @property
    def is_pattern(self) -> bool:
        return self in _PATTERN

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)

    @property
    def axis(self) -> Optional[str]:
        """Axis letter of X/Y/Z kinds (Pauli or rotation), pattern letter for A/B/C kinds."""
        letter = self.letter
        if letter in AXES or letter in PATTERN_AXES:
            return letter
        return None


_SUBSCRIPTED = frozenset(
    {GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PH, GateKind.RA, GateKind.RB, GateKind.RC}
)
_PATTERN = frozenset(
    {GateKind.A, GateKind.B, GateKind.C, GateKind.RA, GateKind.RB, GateKind.RC}
)
_KIND_RANK: Dict[GateKind, int] = {kind: rank for rank, kind in enumerate(GateKind)}

PAULI_OF = {
    "X": GateKind.X, "Y": GateKind.Y, "Z": GateKind.Z,
    "A": GateKind.A, "B": GateKind.B, "C": GateKind.C,
}
ROTATION_OF = {
    "X": GateKind.RX, "Y": GateKind.RY, "Z": GateKind.RZ,
    "A": GateKind.RA, "B": GateKind.RB, "C": GateKind.RC,
}
_FIXED_BY_LETTER = {kind.letter: kind for kind in GateKind if not kind.is_subscripted}
_SUBSCRIPTED_BY_LETTER = {kind.letter: kind for kind in _SUBSCRIPTED}
_TOKEN_RE = re.compile(r"^([IXYZHSTPABC])([0-9]?)$")


@dataclass(frozen=True, slots=True)
class GateToken:
    kind: GateKind
    subscript: Optional[int] = None

    def __post_init__(self):
        if self.kind.is_subscripted:
            if self.subscript is None or not 0 <= self.subscript <= 7:
                raise TokenError(
                    f"{self.kind.name} needs a subscript in 0..7, got {self.subscript}"
                )
        elif self.subscript is not None:
            raise TokenError(f"{self.kind.name} takes no subscript, got {self.subscript}")

    @property
    def order_key(self) -> Tuple[int, int]:
        return (_KIND_RANK[self.kind], self.subscript or 0)

    @property
    def axis(self) -> Optional[str]:
        return self.kind.axis

    def with_subscript(self, subscript: int) -> GateToken:
        return GateToken(self.kind, subscript)

    def __lt__(self, other: GateToken) -> bool:
        return self.order_key < other.order_key

    def __str__(self) -> str:
        if self.kind.is_subscripted:
            return f"{self.kind.letter}{self.subscript}"
        return self.kind.letter

    def __repr__(self) -> str:
        return f"GateToken({self})"


def parse_token(text: str) -> GateToken:
    match = _TOKEN_RE.match(text)
    if match is None:
        raise TokenError(f"Unknown token '{text}'")
    letter, digits = match.groups()
    if not digits:
        if letter not in _FIXED_BY_LETTER:
            raise TokenError(f"Token '{text}' needs a subscript 1..7")
        return GateToken(_FIXED_BY_LETTER[letter])
    if letter not in _SUBSCRIPTED_BY_LETTER:
        raise TokenError(f"Token '{letter}' takes no subscript (got '{text}')")
    subscript = int(digits)
    if not 1 <= subscript <= 7:
        raise TokenError(f"Subscript of '{text}' must be in 1..7")
    return GateToken(_SUBSCRIPTED_BY_LETTER[letter], subscript)


def parse_tokens(text: str) -> Tuple[GateToken, ...]:
    return tuple(parse_token(part) for part in text.split())


def _lambda() -> Tuple[GateToken, ...]:
    fixed = [GateToken(GateKind[name]) for name in ("I", "X", "Y", "Z", "H", "S", "T")]
    subscripted = [
        GateToken(kind, j)
        for kind in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PH)
        for j in range(1, 8)
    ]
    return tuple(fixed + subscripted)


LAMBDA: Tuple[GateToken, ...] = _lambda()
_LAMBDA_INDEX = {token: index for index, token in enumerate(LAMBDA)}
IDENTITY_TOKEN = LAMBDA[0]


def token_index(token: GateToken) -> int:
    try:
        return _LAMBDA_INDEX[token]
    except KeyError:
        raise TokenError(f"{token} is not a member of the 35-gate set")


@dataclass(frozen=True, slots=True)
class SignedWord:
    """A global sign and an ordered gate sequence; the empty sequence is the identity."""

    sign: int = 1
    tokens: Tuple[GateToken, ...] = ()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"Sign must be +1 or -1, got {self.sign}")
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))

    @classmethod
    def of(cls, text: str) -> SignedWord:
        parts = text.split()
        sign = 1
        if parts and parts[0] == "-":
            sign, parts = -1, parts[1:]
        return cls(sign, tuple(parse_token(part) for part in parts))

    def __len__(self) -> int:
        return len(self.tokens)

    def negated(self) -> SignedWord:
        return SignedWord(-self.sign, self.tokens)

    def __add__(self, other: SignedWord) -> SignedWord:
        return SignedWord(self.sign * other.sign, self.tokens + other.tokens)

    @property
    def sort_key(self) -> Tuple:
        return (tuple(t.order_key for t in self.tokens), self.sign)

    def __str__(self) -> str:
        body = " ".join(str(t) for t in self.tokens) or "I"
        return f"- {body}" if self.sign < 0 else body


@dataclass(frozen=True, slots=True)
class Identity:
    lhs: GateToken
    rhs: SignedWord
    grouped: bool = False
    origin_length: Optional[int] = field(default=None, compare=False)

    @property
    def length(self) -> int:
        return len(self.rhs)

    @property
    def mined_length(self) -> int:
        return self.origin_length if self.origin_length is not None else self.length

    @property
    def sort_key(self) -> Tuple:
        return (self.rhs.sort_key, self.lhs.order_key, self.grouped)

    def tokens(self) -> Iterable[GateToken]:
        yield self.lhs
        yield from self.rhs.tokens

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


def _half_angle_parts(j: int) -> Tuple[CycloNum, CycloNum]:
    """cos(pi*j/4) and -i*sin(pi*j/4) for the rotation angle pi*j/2."""
    half = CycloNum.half()
    up, down = CycloNum.zeta_power(j), CycloNum.zeta_power(-j)
    return (up + down) * half, (down - up) * half


_PAULI_EXACT = {
    "I": ExactUnitary.from_rows([[1, 0], [0, 1]]),
    "X": ExactUnitary.from_rows([[0, 1], [1, 0]]),
    "Y": ExactUnitary.from_rows(
        [[0, -CycloNum.zeta_power(2)], [CycloNum.zeta_power(2), 0]]
    ),
    "Z": ExactUnitary.from_rows([[1, 0], [0, -1]]),
}


@lru_cache(maxsize=None)
def token_matrix(token: GateToken) -> ExactUnitary:
    kind = token.kind
    if kind.is_pattern:
        raise TokenError(f"Pattern token {token} has no matrix; expand the grouped identity first")
    if kind.letter in _PAULI_EXACT and not kind.is_subscripted:
        return _PAULI_EXACT[kind.letter]
    if kind is GateKind.H:
        r = CycloNum.of(0, 1, 0, -1, k=1)
        return ExactUnitary.from_rows([[r, r], [r, -r]])
    if kind is GateKind.S:
        return ExactUnitary.from_rows([[1, 0], [0, CycloNum.zeta_power(2)]])
    if kind is GateKind.T:
        return ExactUnitary.from_rows([[1, 0], [0, CycloNum.zeta_power(1)]])
    if kind is GateKind.PH:
        return ExactUnitary.scalar(CycloNum.zeta_power(token.subscript))
    cos, minus_i_sin = _half_angle_parts(token.subscript)
    return _PAULI_EXACT["I"].scale(cos) + _PAULI_EXACT[kind.letter].scale(minus_i_sin)


_PAULI_FLOAT = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@lru_cache(maxsize=None)
def _float_token_matrix(token: GateToken) -> np.ndarray:
    kind = token.kind
    if kind.is_pattern:
        raise TokenError(f"Pattern token {token} has no matrix; expand the grouped identity first")
    if kind.letter in _PAULI_FLOAT and not kind.is_subscripted:
        matrix = _PAULI_FLOAT[kind.letter]
    elif kind is GateKind.H:
        matrix = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
    elif kind is GateKind.S:
        matrix = np.diag([1, 1j]).astype(np.complex128)
    elif kind is GateKind.T:
        matrix = np.diag([1, np.exp(1j * np.pi / 4)]).astype(np.complex128)
    else:
        theta = np.pi * token.subscript / 2
        if kind is GateKind.PH:
            matrix = np.exp(1j * theta / 2) * _PAULI_FLOAT["I"]
        else:
            matrix = (
                np.cos(theta / 2) * _PAULI_FLOAT["I"]
                - 1j * np.sin(theta / 2) * _PAULI_FLOAT[kind.letter]
            )
    matrix = matrix.copy()
    matrix.setflags(write=False)
    return matrix


def float_token_matrix(token: GateToken) -> np.ndarray:
    return _float_token_matrix(token)


@lru_cache(maxsize=1 << 16)
def _exact_product(tokens: Tuple[GateToken, ...]) -> ExactUnitary:
    if not tokens:
        return ExactUnitary.identity()
    return _exact_product(tokens[:-1]) @ token_matrix(tokens[-1])


def eval_word(word: SignedWord) -> ExactUnitary:
    product = _exact_product(word.tokens)
    return product if word.sign > 0 else -product


def eval_word_float(word: SignedWord) -> np.ndarray:
    product = _PAULI_FLOAT["I"]
    for token in word.tokens:
        product = product @ float_token_matrix(token)
    return product if word.sign > 0 else -product


def approx_equal(a: np.ndarray, b: np.ndarray, eps: float = DEFAULT_TOLERANCE) -> bool:
    if eps <= 0:
        raise ValueError(f"Tolerance must be positive, got {eps}")
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= eps)


def exact_equal(a: ExactUnitary, b: ExactUnitary) -> bool:
    return a.entries == b.entries


def identity_holds(identity: Identity) -> bool:
    """Exact check of a concrete (ungrouped) identity."""
    return exact_equal(token_matrix(identity.lhs), eval_word(identity.rhs))
