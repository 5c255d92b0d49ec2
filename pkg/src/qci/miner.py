from __future__ import annotations

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from .gates import (
    DEFAULT_TOLERANCE,
    LAMBDA,
    Identity,
    SignedWord,
    eval_word,
    float_token_matrix,
    token_index,
    token_matrix,
)

logger = logging.getLogger(__name__)

BLOCK_SIZE = 8192


def lambda_float_stack() -> np.ndarray:
    return np.stack([float_token_matrix(t) for t in LAMBDA])


@dataclass
class RawIdentitySet:
    """Mined (lhs, word) pairs, one integer array per word length.

    Row layout is ``[lhs_index, token_index_1, ..., token_index_n]`` into the
    gate set order; rows are sorted by word, then by lhs.
    """

    matches: Dict[int, np.ndarray] = field(default_factory=dict)
    rejected: int = 0

    @property
    def lengths(self) -> List[int]:
        return sorted(self.matches)

    @property
    def counts_by_length(self) -> Dict[int, int]:
        return {n: len(rows) for n, rows in sorted(self.matches.items())}

    def __len__(self) -> int:
        return sum(self.counts_by_length.values())

    def iter_identities(self, length: Optional[int] = None) -> Iterator[Identity]:
        lengths = self.lengths if length is None else [length]
        for n in lengths:
            for row in self.matches.get(n, ()):
                yield Identity(
                    lhs=LAMBDA[row[0]],
                    rhs=SignedWord(1, tuple(LAMBDA[i] for i in row[1:])),
                    origin_length=n,
                )

    @property
    def identities(self) -> List[Identity]:
        return list(self.iter_identities())

    @classmethod
    def from_identities(cls, identities: Iterable[Identity]) -> RawIdentitySet:
        rows: Dict[int, List[List[int]]] = {}
        for identity in identities:
            if identity.rhs.sign < 0 or identity.grouped:
                raise ValueError(f"Raw identities have positive, ungrouped rhs: {identity}")
            row = [token_index(identity.lhs)] + [token_index(t) for t in identity.rhs.tokens]
            rows.setdefault(identity.length, []).append(row)
        matches = {}
        for n, group in rows.items():
            array = np.array(sorted(group, key=lambda r: (r[1:], r[0])), dtype=np.int16)
            matches[n] = array.reshape(-1, n + 1)
        return cls(matches=matches)


def _suffix_products(length: int, stack: np.ndarray) -> np.ndarray:
    """All products of ``length`` gates in lexicographic word order, one multiply per extension."""
    products = np.eye(2, dtype=np.complex128)[None]
    for _ in range(length):
        products = np.einsum("wij,tjk->wtik", products, stack).reshape(-1, 2, 2)
    return products


def _word_digits(rows: np.ndarray, width: int) -> np.ndarray:
    size = len(LAMBDA)
    digits = [(rows // size ** (width - 1 - i)) % size for i in range(width)]
    return np.stack(digits, axis=1) if digits else np.empty((len(rows), 0), dtype=np.int64)


def _exact_match(lhs: int, word: Tuple[int, ...]) -> bool:
    value = eval_word(SignedWord(1, tuple(LAMBDA[i] for i in word)))
    return value == token_matrix(LAMBDA[lhs])


def _mine_partition(task: Tuple[int, int, np.ndarray, float, bool]) -> Tuple[np.ndarray, int]:
    first, width, suffixes, eps, verify = task
    stack = lambda_float_stack()
    found = []
    for start in range(0, len(suffixes), BLOCK_SIZE):
        words = np.einsum("ij,wjk->wik", stack[first], suffixes[start:start + BLOCK_SIZE])
        distance = np.abs(words[:, None, :, :] - stack[None, :, :, :]).max(axis=(2, 3))
        word_rows, lhs = np.nonzero(distance <= eps)
        if len(word_rows):
            tails = _word_digits(word_rows + start, width)
            heads = np.full((len(word_rows), 1), first)
            found.append(np.hstack([lhs[:, None], heads, tails]))
    if not found:
        return np.empty((0, width + 2), dtype=np.int16), 0

    rows = np.vstack(found).astype(np.int16)
    rejected = 0
    if verify:
        keep = np.array([_exact_match(int(r[0]), tuple(int(i) for i in r[1:])) for r in rows])
        rejected = int((~keep).sum())
        if rejected:
            logger.warning("Dropped %d float matches that fail exact verification", rejected)
        rows = rows[keep]
    return rows, rejected


def mine(
    max_len: int,
    eps: float = DEFAULT_TOLERANCE,
    workers: int = 1,
    verify: bool = True,
) -> RawIdentitySet:
    """Compare every product of 1..max_len gates against the 35 gates themselves."""
    if max_len < 1:
        raise ValueError(f"max_len must be at least 1, got {max_len}")
    if eps <= 0:
        raise ValueError(f"Tolerance must be positive, got {eps}")

    stack = lambda_float_stack()
    result = RawIdentitySet()
    for n in range(1, max_len + 1):
        suffixes = _suffix_products(n - 1, stack)
        tasks = [(first, n - 1, suffixes, eps, verify) for first in range(len(LAMBDA))]
        if workers > 1:
            with Pool(workers) as pool:
                partitions = pool.map(_mine_partition, tasks)
        else:
            partitions = [_mine_partition(task) for task in tasks]

        rows = np.vstack([p[0] for p in partitions]) if partitions else np.empty((0, n + 1))
        result.rejected += sum(p[1] for p in partitions)
        # partitions arrive in first-token order; rows inside are word-major
        result.matches[n] = rows.astype(np.int16).reshape(-1, n + 1)
        logger.info(
            "Length %d: %d words, %d identities", n, len(LAMBDA) ** n, len(result.matches[n])
        )
    return result


def count_table(raw: RawIdentitySet, max_len: Optional[int] = None) -> pd.DataFrame:
    """Per-length and cumulative counts, cumulative columns as in the published table."""
    counts = raw.counts_by_length
    max_len = max_len if max_len is not None else max(counts, default=0)
    lengths = list(range(1, max_len + 1))
    df = pd.DataFrame(
        {"length": lengths, "count": [counts.get(n, 0) for n in lengths]}
    )
    df["cumulative"] = df["count"].cumsum()
    df.index = ["Length 1" if n == 1 else f"Length <={n}" for n in lengths]
    return df


def cumulative_counts(raw: RawIdentitySet, max_len: Optional[int] = None) -> Tuple[int, ...]:
    return tuple(int(x) for x in count_table(raw, max_len)["cumulative"])
