"""Enumerating the margin effects of small added-ballot sets.

The replayed assertions depend on a profile only through its margin matrix, so
"for every delta S with |S| <= K" is decided by the set of distinct margin
effects of multisets of at most K ballots. Effects are kept as rows over the
upper-triangle pairs and deduplicated by packing each row into one integer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..margins import ballot_effect
from ..profiles import Ranking, enumerate_linear_orders, enumerate_weak_orders

_BITS = 4
_OFFSET = 8  # entries must stay in [-7, 7]
_CHUNK = 100_000


def delta_domain(candidates: tuple[str, ...], mode: str) -> list[Ranking]:
    if mode == "linear":
        return enumerate_linear_orders(candidates)
    if mode == "weak":
        return enumerate_weak_orders(candidates)
    raise ValueError(f"unknown delta mode {mode!r}")


def multiset_count(domain_size: int, max_size: int) -> int:
    """Number of ballot multisets of size 0..max_size (size 0 is the no-op)."""
    return sum(math.comb(domain_size + k - 1, k) for k in range(max_size + 1))


def pair_rows(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def effect_rows(candidates: tuple[str, ...], rankings: list[Ranking]) -> np.ndarray:
    rows = pair_rows(len(candidates))
    return np.array(
        [[ballot_effect(r, candidates)[i, j] for i, j in rows] for r in rankings], dtype=np.int8
    ).reshape(len(rankings), len(rows))


def _pack(rows: np.ndarray) -> np.ndarray:
    w = np.int64(1) << (_BITS * np.arange(rows.shape[1], dtype=np.int64))
    return ((rows.astype(np.int64) + _OFFSET) * w).sum(axis=1)


def _unpack(codes: np.ndarray, width: int) -> np.ndarray:
    shifts = _BITS * np.arange(width, dtype=np.int64)
    return (((codes[:, None] >> shifts) & ((1 << _BITS) - 1)) - _OFFSET).astype(np.int8)


@lru_cache(maxsize=16)
def distinct_sums(candidates: tuple[str, ...], mode: str, max_size: int) -> np.ndarray:
    """Distinct effect rows of all ballot multisets with 0..max_size ballots.

    Returns an int8 array of shape (count, pairs); row 0 is the zero effect.
    """
    if max_size >= _OFFSET:
        raise ValueError("at most 7 added ballots are supported")
    width = len(pair_rows(len(candidates)))
    if _BITS * width > 62:
        raise ValueError("too many candidates for packed effect rows")
    singles = _pack(effect_rows(candidates, delta_domain(candidates, mode)))
    zero = _pack(np.zeros((1, width), dtype=np.int8))
    step = singles - zero  # adding a packed delta to a packed row adds the digits
    level = zero
    levels = [zero]
    for _ in range(max_size):
        parts = [
            np.unique((level[i : i + _CHUNK, None] + step[None, :]).ravel())
            for i in range(0, len(level), _CHUNK)
        ]
        level = np.unique(np.concatenate(parts))
        levels.append(level)
    codes = np.unique(np.concatenate(levels))
    codes = np.concatenate([zero, codes[codes != zero[0]]])
    out = _unpack(codes, width)
    out.setflags(write=False)
    return out


def rows_to_matrices(rows: np.ndarray, n: int, dtype=np.int32) -> np.ndarray:
    mats = np.zeros((rows.shape[0], n, n), dtype=dtype)
    for k, (i, j) in enumerate(pair_rows(n)):
        mats[:, i, j] = rows[:, k]
        mats[:, j, i] = -rows[:, k]
    return mats


@dataclass(frozen=True)
class DeltaSpace:
    """All deltas of at most ``size`` ballots drawn from ``mode`` rankings, plus the no-op."""

    candidates: tuple[str, ...]
    mode: str
    size: int

    @property
    def domain(self) -> list[Ranking]:
        return delta_domain(self.candidates, self.mode)

    @property
    def cardinality(self) -> int:
        return multiset_count(len(self.domain), self.size)

    def single_effects(self) -> np.ndarray:
        """Effect matrices of every delta in the space, one per multiset (no-op first)."""
        dom = self.domain
        n = len(self.candidates)
        eff = [np.zeros((n, n), dtype=np.int32)]
        base = [ballot_effect(r, self.candidates).astype(np.int32) for r in dom]
        for k in range(1, self.size + 1):
            for combo in itertools.combinations_with_replacement(range(len(dom)), k):
                eff.append(sum(base[i] for i in combo))
        return np.stack(eff)

    def distinct_effects(self, total_size: int | None = None) -> np.ndarray:
        """Distinct effect matrices for sums of up to ``total_size`` ballots."""
        k = self.size if total_size is None else total_size
        return rows_to_matrices(distinct_sums(self.candidates, self.mode, k), len(self.candidates))

    def distinct_effect_chunks(self, total_size: int, chunk: int = 500_000):
        rows = distinct_sums(self.candidates, self.mode, total_size)
        n = len(self.candidates)
        for i in range(0, len(rows), chunk):
            yield rows_to_matrices(rows[i : i + chunk], n)
