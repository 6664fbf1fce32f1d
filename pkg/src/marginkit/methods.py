"""The five margin-based voting methods: Borda, Minimax, Leximax, Ranked Pairs, Split Cycle.

Each method accepts a ``Profile`` or a ``MarginMatrix`` and returns a nonempty
``frozenset`` of winning candidates. All five depend on the profile only through
its margins, which lets the axiom checkers add ballots at the matrix level.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .margins import MarginMatrix, margin_matrix, strength_matrix
from .profiles import Profile

WinnerSet = frozenset

METHOD_IDS = ("borda", "minimax", "leximax", "ranked-pairs", "split-cycle")

DEFAULT_RP_CAP = 10_000


class TieExplosion(RuntimeError):
    """Ranked Pairs tie-breaking exceeded its state budget."""


def _mm(p: Profile | MarginMatrix) -> MarginMatrix:
    return p if isinstance(p, MarginMatrix) else margin_matrix(p)


def _pick(mm: MarginMatrix, mask) -> frozenset[str]:
    return frozenset(c for c, ok in zip(mm.candidates, mask) if ok)


def borda_scores(p: Profile | MarginMatrix) -> dict[str, int]:
    """Symmetric Borda score: sum of a candidate's margins against everyone else."""
    mm = _mm(p)
    return dict(zip(mm.candidates, (int(s) for s in mm.m.sum(axis=1))))


def borda(p: Profile | MarginMatrix) -> frozenset[str]:
    mm = _mm(p)
    s = mm.m.sum(axis=1)
    return _pick(mm, s == s.max())


def minimax(p: Profile | MarginMatrix) -> frozenset[str]:
    mm = _mm(p)
    n = len(mm.candidates)
    if n == 1:
        return frozenset(mm.candidates)
    worst = np.where(np.eye(n, dtype=bool), np.iinfo(np.int64).min, mm.m).max(axis=0)
    return _pick(mm, worst == worst.min())


def leximax(p: Profile | MarginMatrix) -> frozenset[str]:
    mm = _mm(p)
    n = len(mm.candidates)
    vecs = [tuple(sorted(int(mm.m[i, j]) for j in range(n) if j != i)) for i in range(n)]
    best = max(vecs)
    return _pick(mm, [v == best for v in vecs])


def split_cycle_defeats(p: Profile | MarginMatrix) -> np.ndarray:
    """``d[i, j]`` is True when candidate i defeats j: its margin beats the widest return path."""
    m = _mm(p).m
    s = strength_matrix(m)
    return (m > 0) & (m > s.T)


def split_cycle(p: Profile | MarginMatrix) -> frozenset[str]:
    mm = _mm(p)
    d = split_cycle_defeats(mm)
    return _pick(mm, ~d.any(axis=0))


def _reaches(adj: list[int], src: int, dst: int) -> bool:
    seen = 1 << src
    stack = [src]
    while stack:
        u = stack.pop()
        if u == dst:
            return True
        nxt = adj[u] & ~seen
        seen |= nxt
        while nxt:
            low = nxt & -nxt
            stack.append(low.bit_length() - 1)
            nxt ^= low
    return False


def ranked_pairs(p: Profile | MarginMatrix, cap: int = DEFAULT_RP_CAP) -> frozenset[str]:
    """Ranked Pairs with parallel-universe tie-breaking.

    Edges of equal margin may be locked in any order; the result is the union,
    over all such priorities, of the undominated candidates of the locked graph.
    The search is memoised on (tie class, remaining edges, locked graph); more
    than ``cap`` distinct states raises ``TieExplosion``.
    """
    mm = _mm(p)
    m = mm.m
    n = len(mm.candidates)
    weights = sorted({int(w) for w in m.ravel() if w > 0}, reverse=True)
    classes = [
        tuple((i, j) for i in range(n) for j in range(n) if m[i, j] == w) for w in weights
    ]
    winners: set[int] = set()
    seen: set = set()

    def run(ci: int, remaining: frozenset, adj: tuple[int, ...]):
        key = (ci, remaining, adj)
        if key in seen:
            return
        seen.add(key)
        if len(seen) > cap:
            raise TieExplosion(f"more than {cap} tie-breaking states")
        if not remaining:
            if ci == len(classes):
                incoming = 0
                for row in adj:
                    incoming |= row
                winners.update(v for v in range(n) if not incoming >> v & 1)
                return
            run(ci + 1, frozenset(classes[ci]), adj)
            return
        for e in sorted(remaining):
            i, j = e
            rest = remaining - {e}
            if _reaches(list(adj), j, i):
                run(ci, rest, adj)
            else:
                new = list(adj)
                new[i] |= 1 << j
                run(ci, rest, tuple(new))

    run(0, frozenset(), tuple([0] * n))
    return frozenset(mm.candidates[v] for v in winners)


METHODS: dict[str, Callable[[Profile | MarginMatrix], frozenset[str]]] = {
    "borda": borda,
    "minimax": minimax,
    "leximax": leximax,
    "ranked-pairs": ranked_pairs,
    "split-cycle": split_cycle,
}


def get_method(name: str) -> Callable[[Profile | MarginMatrix], frozenset[str]]:
    try:
        return METHODS[name]
    except KeyError:
        raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHOD_IDS)}") from None
