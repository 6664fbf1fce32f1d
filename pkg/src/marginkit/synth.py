"""Realizing target margin matrices as profiles.

``mcgarvey_debord_realize`` is the constructive route (any same-parity target);
``minimize_profile`` is an exact branch-and-bound over a fixed ranking pool that
looks for the fewest voters reproducing a target exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .margins import MarginMatrix, ballot_effect, margin_matrix
from .profiles import Profile, Ranking, block_of_all_linear_orders

DEFAULT_CAP = 500
DEFAULT_MAX_NODES = 500_000


class SynthesisError(ValueError):
    pass


class Infeasible(SynthesisError):
    """No count vector over the pool reproduces the target.

    ``within_cap`` is True when the search only proved there is no solution
    with at most ``cap`` voters.
    """

    def __init__(self, msg: str, within_cap: bool):
        super().__init__(msg)
        self.within_cap = within_cap


def target_parity(t: MarginMatrix) -> int:
    n = len(t.candidates)
    vals = {int(t.m[i, j]) % 2 for i in range(n) for j in range(n) if i != j}
    if len(vals) > 1:
        raise SynthesisError("off-diagonal target entries must all share one parity")
    return vals.pop() if vals else 0


def _even_realization(t: np.ndarray, cands: tuple[str, ...]) -> dict[Ranking, int]:
    counts: dict[Ranking, int] = {}
    n = len(cands)
    for i, j in itertools.combinations(range(n), 2):
        w = int(t[i, j])
        if w == 0:
            continue
        x, y = (cands[i], cands[j]) if w > 0 else (cands[j], cands[i])
        rest = [c for c in cands if c not in (x, y)]
        # x>y>rest and rev(rest)>x>y: +2 on (x, y), cancels everywhere else
        for r in (Ranking.linear([x, y, *rest]), Ranking.linear([*rest[::-1], x, y])):
            counts[r] = counts.get(r, 0) + abs(w) // 2
    return counts


def mcgarvey_debord_realize(t: MarginMatrix) -> Profile:
    cands = t.candidates
    parity = target_parity(t)
    counts: dict[Ranking, int] = {}
    residual = t.m
    if parity == 1:
        seed = Ranking.linear(cands)
        counts[seed] = 1
        residual = residual - ballot_effect(seed, cands)
    for r, k in _even_realization(residual, cands).items():
        counts[r] = counts.get(r, 0) + k
    if not counts:
        base = Ranking.linear(cands)
        counts = {base: 1, base.reversed(): 1}
        if base == base.reversed():
            counts = {base: 1}
    return Profile.from_counts(cands, counts)


@dataclass(frozen=True)
class SynthesisResult:
    profile: Profile
    total_voters: int
    optimal: bool
    explored: int


def _rows(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _cycle_directions(n: int, max_len: int = 5) -> np.ndarray:
    """Sign vectors over the pair rows for unit rows and every directed cycle.

    A strict weak order agrees with at most L-1 edges of an L-cycle and then
    disagrees with one, so these vectors give covering lower bounds.
    """
    rows = _rows(n)
    index = {pr: k for k, pr in enumerate(rows)}
    out = []
    for k in range(len(rows)):
        for sgn in (1, -1):
            v = np.zeros(len(rows), dtype=np.int64)
            v[k] = sgn
            out.append(v)
    for length in range(3, min(n, max_len) + 1):
        for nodes in itertools.combinations(range(n), length):
            first, rest = nodes[0], nodes[1:]
            for perm in itertools.permutations(rest):
                cyc = (first, *perm)
                v = np.zeros(len(rows), dtype=np.int64)
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    if a < b:
                        v[index[(a, b)]] += 1
                    else:
                        v[index[(b, a)]] -= 1
                out.append(v)
    return np.array(out)


def minimize_profile(
    t: MarginMatrix,
    pool,
    cap: int = DEFAULT_CAP,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> SynthesisResult:
    """Fewest voters over ``pool`` whose margins equal ``t`` exactly.

    Depth-first branch and bound on per-ranking counts. At each node the unfixed
    ranking agreeing with most unmet margins is branched on, largest count
    first. A node is pruned when voters used plus a lower bound on the voters
    still needed reaches the incumbent. The bound is the best of
    ``s.R / max_r s.a_r`` over single pairs and directed cycles ``s`` (each
    ballot moves such a sum by at most ``max_r s.a_r``), plus a parity argument
    for all-linear pools. Once the unfixed rankings are linearly independent
    the remaining counts are solved for directly.

    ``optimal`` is False only when ``max_nodes`` ran out first.
    """
    pool = sorted({r if isinstance(r, Ranking) else Ranking.parse(r) for r in pool})
    if not pool:
        raise SynthesisError("empty ranking pool")
    if cap < 1:
        raise SynthesisError("cap must be at least 1")
    cands = t.candidates
    rows = _rows(len(cands))
    if not rows:
        raise SynthesisError("need at least two candidates")
    A = np.array([[ballot_effect(r, cands)[i, j] for i, j in rows] for r in pool], dtype=np.int64)
    T = np.array([t.m[i, j] for i, j in rows], dtype=np.int64)
    S = _cycle_directions(len(cands))
    SA = S @ A.T  # (directions, pool)
    linear_pool = all(r.is_linear for r in pool)

    for j in range(len(rows)):
        if (T[j] > 0 and not (A[:, j] > 0).any()) or (T[j] < 0 and not (A[:, j] < 0).any()):
            raise Infeasible("no pool ranking can produce the required margin sign", within_cap=False)

    best_counts: list = [None]
    best_total = [cap + 1]
    explored = 0
    exhausted = True

    def lower_bound(R: np.ndarray, free: list[int]) -> int | None:
        if not R.any():
            return 0 if (free or counts) else None
        if not free:
            return None
        need = S @ R
        supply = SA[:, free].max(axis=1)
        pos = need > 0
        if np.any(pos & (supply <= 0)):
            return None
        lb = int(np.max(-(-need[pos] // supply[pos]))) if pos.any() else 0
        if linear_pool:
            par = R % 2
            if par.min() != par.max():
                return None
            if lb % 2 != par[0]:
                lb += 1
        return lb

    def solve_direct(R: np.ndarray, free: list[int], used: int) -> None:
        sub = A[free].T.astype(float)
        x, *_ = np.linalg.lstsq(sub, R.astype(float), rcond=None)
        xi = np.rint(x).astype(np.int64)
        if np.any(xi < 0) or not np.array_equal(A[free].T @ xi, R):
            return
        total = used + int(xi.sum())
        if 0 < total < best_total[0]:
            best_counts[0] = {**counts, **{free[k]: int(v) for k, v in enumerate(xi) if v}}
            best_total[0] = total

    counts: dict[int, int] = {}

    def dfs(R: np.ndarray, used: int, free: list[int]):
        nonlocal explored, exhausted
        explored += 1
        if explored > max_nodes:
            exhausted = False
            raise _Stop
        lb = lower_bound(R, free)
        if lb is not None and used == 0:
            lb = max(lb, 1)  # a profile needs at least one voter
        if lb is None or used + lb >= best_total[0]:
            return
        if not R.any() and used:
            best_counts[0], best_total[0] = dict(counts), used
            return
        if np.linalg.matrix_rank(A[free]) == len(free):
            solve_direct(R, free, used)
            return
        cover = A[free] @ np.sign(R)
        k = int(np.argmax(cover))
        r = free[k]
        rest = free[:k] + free[k + 1 :]
        a = A[r]
        room = best_total[0] - 1 - used
        absR = np.abs(R)
        agree = a * np.sign(R) > 0
        hi = np.where(a == 0, room - absR, np.where(agree, (room + absR) // 2, (room - absR) // 2))
        for c in range(int(hi.min()), -1, -1):
            if c:
                counts[r] = c
            dfs(R - c * a, used + c, rest)
            counts.pop(r, None)

    try:
        dfs(T, 0, list(range(len(pool))))
    except _Stop:
        pass
    if best_counts[0] is None:
        if exhausted:
            raise Infeasible(f"no profile over the pool with at most {cap} voters", within_cap=True)
        raise Infeasible(f"node budget {max_nodes} exhausted without a solution", within_cap=True)
    prof = Profile.from_counts(cands, {pool[i]: k for i, k in best_counts[0].items()})
    if margin_matrix(prof) != t:
        raise AssertionError("synthesized profile does not reproduce the target")
    return SynthesisResult(prof, prof.num_voters, exhausted, explored)


class _Stop(Exception):
    pass


def pad_with_blocks(p: Profile, copies: int) -> Profile:
    if copies < 1:
        raise SynthesisError("copies must be at least 1")
    return p + block_of_all_linear_orders(p.candidates, copies)
