"""Margin matrices, margin graphs, and the margin-level predicates used in the proofs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .profiles import Profile, ProfileError, Ranking


@lru_cache(maxsize=8192)
def ballot_effect(r: Ranking, candidates: tuple[str, ...]) -> np.ndarray:
    """Margin contribution of a single ballot: +1 at (x, y) when x is above y."""
    rank = np.array([r.rank_of[c] for c in candidates])
    eff = np.sign(rank[None, :] - rank[:, None]).astype(np.int64)
    eff.setflags(write=False)
    return eff


@dataclass(frozen=True, eq=False)
class MarginMatrix:
    """Antisymmetric integer matrix indexed by ``candidates``.

    ``m[i, j]`` is the margin of ``candidates[i]`` over ``candidates[j]``.
    """

    candidates: tuple[str, ...]
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.int64)
        n = len(self.candidates)
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match {n} candidates")
        if np.any(np.diag(m) != 0) or np.any(m != -m.T):
            raise ValueError("margin matrix must be antisymmetric with zero diagonal")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def from_edges(cls, candidates: Iterable[str], edges: dict[tuple[str, str], int]) -> MarginMatrix:
        cands = tuple(sorted(candidates))
        idx = {c: i for i, c in enumerate(cands)}
        m = np.zeros((len(cands), len(cands)), dtype=np.int64)
        for (x, y), w in edges.items():
            m[idx[x], idx[y]] = w
            m[idx[y], idx[x]] = -w
        return cls(cands, m)

    def index(self, c: str) -> int:
        try:
            return self.candidates.index(c)
        except ValueError:
            raise ProfileError(f"unknown candidate {c!r}") from None

    def __getitem__(self, pair: tuple[str, str]) -> int:
        x, y = pair
        return int(self.m[self.index(x), self.index(y)])

    def __eq__(self, other):
        if not isinstance(other, MarginMatrix):
            return NotImplemented
        return self.candidates == other.candidates and np.array_equal(self.m, other.m)

    def __hash__(self):
        return hash((self.candidates, self.m.tobytes()))

    def __add__(self, other: MarginMatrix) -> MarginMatrix:
        if self.candidates != other.candidates:
            raise ProfileError("candidate sets differ")
        return MarginMatrix(self.candidates, self.m + other.m)

    def __mul__(self, n: int) -> MarginMatrix:
        return MarginMatrix(self.candidates, self.m * n)

    __rmul__ = __mul__

    def edges(self) -> dict[tuple[str, str], int]:
        """Positive entries as ``{(x, y): weight}``, the margin graph's edges."""
        c = self.candidates
        n = len(c)
        return {
            (c[i], c[j]): int(self.m[i, j])
            for i in range(n)
            for j in range(n)
            if self.m[i, j] > 0
        }

    def graph(self) -> MarginGraph:
        return MarginGraph(self.candidates, self.edges())

    def max_margin(self) -> int:
        return int(self.m.max()) if len(self.candidates) > 1 else 0


@dataclass(frozen=True)
class MarginGraph:
    vertices: tuple[str, ...]
    edges: dict[tuple[str, str], int]

    def __post_init__(self):
        for (x, y), w in self.edges.items():
            if w <= 0:
                raise ValueError(f"edge {x}->{y} has non-positive weight {w}")
            if (y, x) in self.edges:
                raise ValueError(f"both {x}->{y} and {y}->{x} present")

    def matrix(self) -> MarginMatrix:
        return MarginMatrix.from_edges(self.vertices, self.edges)

    def weight(self, x: str, y: str) -> int:
        return self.edges.get((x, y), 0)


def margin_matrix(p: Profile) -> MarginMatrix:
    n = len(p.candidates)
    m = np.zeros((n, n), dtype=np.int64)
    for r, k in p.ballots:
        m += k * ballot_effect(r, p.candidates)
    return MarginMatrix(p.candidates, m)


def margin_graph(p: Profile) -> MarginGraph:
    return margin_matrix(p).graph()


def margin(p: Profile, x: str, y: str) -> int:
    for c in (x, y):
        if c not in p.candidates:
            raise ProfileError(f"unknown candidate {c!r}")
    total = 0
    for r, k in p.ballots:
        rx, ry = r.rank_of[x], r.rank_of[y]
        if rx < ry:
            total += k
        elif ry < rx:
            total -= k
    return total


def _as_matrix(p: Profile | MarginMatrix) -> MarginMatrix:
    return p if isinstance(p, MarginMatrix) else margin_matrix(p)


def condorcet_winner(p: Profile | MarginMatrix) -> str | None:
    mm = _as_matrix(p)
    m = mm.m
    n = len(mm.candidates)
    for i in range(n):
        if all(m[i, j] > 0 for j in range(n) if j != i):
            return mm.candidates[i]
    return None


def condorcet_loser(p: Profile | MarginMatrix) -> str | None:
    mm = _as_matrix(p)
    m = mm.m
    n = len(mm.candidates)
    for i in range(n):
        if all(m[j, i] > 0 for j in range(n) if j != i):
            return mm.candidates[i]
    return None


def defensible_mask(m: np.ndarray) -> np.ndarray:
    """Boolean mask of defensible candidates; works on stacks ``(..., n, n)``.

    x is defensible iff for every y, margin(y, x) <= max_z margin(z, y). The max
    ranges over all z, including z = y where the margin is 0.
    """
    best_attack = m.max(axis=-2)  # best_attack[..., y] = max_z m[z, y]
    return np.all(m <= best_attack[..., :, None], axis=-2)


def defensible_set(p: Profile | MarginMatrix) -> frozenset[str]:
    mm = _as_matrix(p)
    mask = defensible_mask(mm.m)
    return frozenset(c for c, ok in zip(mm.candidates, mask) if ok)


def separation_mask(m: np.ndarray, gap: int = 2) -> np.ndarray:
    """True where every two distinct off-diagonal margins differ by at least ``gap``."""
    n = m.shape[-1]
    off = ~np.eye(n, dtype=bool)
    vals = np.sort(m[..., off], axis=-1)
    d = np.diff(vals, axis=-1)
    return np.all((d == 0) | (d >= gap), axis=-1)


def margin_separation_holds(p: Profile | MarginMatrix) -> bool:
    """Lemma-style separation: any strictly larger margin exceeds the other by 2+."""
    mm = _as_matrix(p)
    if len(mm.candidates) < 2:
        return True
    return bool(separation_mask(mm.m))


def min_weight_gap(p: Profile | MarginMatrix) -> int | None:
    """Smallest difference between two distinct positive edge weights."""
    w = sorted(set(_as_matrix(p).edges().values()))
    gaps = [b - a for a, b in zip(w, w[1:])]
    return min(gaps) if gaps else None


def uniquely_weighted(p: Profile | MarginMatrix) -> bool:
    mm = _as_matrix(p)
    n = len(mm.candidates)
    vals = [int(mm.m[i, j]) for i in range(n) for j in range(n) if i != j]
    return len(set(vals)) == len(vals)


def strength_matrix(m: np.ndarray) -> np.ndarray:
    """All-pairs widest-path strength over positive margins (max-min Floyd-Warshall)."""
    s = np.where(m > 0, m, 0)
    n = s.shape[0]
    for k in range(n):
        s = np.maximum(s, np.minimum(s[:, k : k + 1], s[k : k + 1, :]))
    np.fill_diagonal(s, 0)
    return s


def widest_path_strength(g: MarginGraph | MarginMatrix, x: str, y: str) -> int:
    mm = g.matrix() if isinstance(g, MarginGraph) else g
    if x == y:
        raise ValueError("widest path needs x != y")
    s = strength_matrix(mm.m)
    return int(s[mm.index(x), mm.index(y)])


def brute_force_strength(g: MarginGraph, x: str, y: str) -> int:
    """Max over simple paths of the min edge weight; exponential, for checking."""
    others = [v for v in g.vertices if v not in (x, y)]
    best = 0
    for k in range(len(others) + 1):
        for mid in itertools.permutations(others, k):
            path = (x, *mid, y)
            ws = [g.weight(a, b) for a, b in zip(path, path[1:])]
            if all(w > 0 for w in ws):
                best = max(best, min(ws))
    return best
