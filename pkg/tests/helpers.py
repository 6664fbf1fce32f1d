"""Shared generators for the test modules."""

import numpy as np
from hypothesis import strategies as st

from oracles import margin

from marginkit.margins import MarginMatrix
from marginkit.profiles import Profile, Ranking, enumerate_linear_orders, enumerate_weak_orders

LABELS = "abcde"


def as_ballots(p: Profile):
    """Oracle form: [(count, [[tier], ...]), ...]."""
    return [(k, [list(t) for t in r.tiers]) for r, k in p.ballots]


def random_profile(rng: np.random.Generator, max_cands=5, max_voters=20, weak=False, min_cands=2) -> Profile:
    m = int(rng.integers(min_cands, max_cands + 1))
    cands = tuple(LABELS[:m])
    dom = _domain(cands, weak)
    picks = rng.integers(0, len(dom), size=int(rng.integers(1, max_voters + 1)))
    counts = {}
    for i in picks:
        counts[dom[i]] = counts.get(dom[i], 0) + 1
    return Profile(cands, tuple(counts.items()))


_DOMAINS = {}


def _domain(cands, weak):
    key = (cands, weak)
    if key not in _DOMAINS:
        _DOMAINS[key] = enumerate_weak_orders(cands) if weak else enumerate_linear_orders(cands)
    return _DOMAINS[key]


@st.composite
def profiles(draw, min_cands=2, max_cands=5, max_voters=12, weak=None):
    m = draw(st.integers(min_cands, max_cands))
    cands = tuple(LABELS[:m])
    use_weak = draw(st.booleans()) if weak is None else weak
    dom = _domain(cands, use_weak)
    idx = draw(st.lists(st.integers(0, len(dom) - 1), min_size=1, max_size=max_voters))
    counts = {}
    for i in idx:
        counts[dom[i]] = counts.get(dom[i], 0) + 1
    return Profile(cands, tuple(counts.items()))


@st.composite
def rankings_over(draw, cands, weak=True):
    dom = _domain(tuple(cands), weak)
    return dom[draw(st.integers(0, len(dom) - 1))]


def R(s: str) -> Ranking:
    return Ranking.parse(s)


def random_target(rng, k, bound=9):
    parity = int(rng.integers(2))
    m = np.zeros((k, k), dtype=int)
    for i in range(k):
        for j in range(i + 1, k):
            vals = [w for w in range(-bound, bound + 1) if w % 2 == parity]
            w = int(rng.choice(vals))
            m[i, j], m[j, i] = w, -w
    return MarginMatrix(tuple("abcde"[:k]), m)


def small_instances(rng, count, cap=30):
    """Random pools of 1..4 weak orders; most targets are built from the pool, some are arbitrary."""
    cands = ("a", "b", "c")
    weak = enumerate_weak_orders(cands)
    out = []
    while len(out) < count:
        pool = [weak[i] for i in rng.choice(len(weak), size=int(rng.integers(1, 5)), replace=False)]
        if rng.integers(4):
            counts = rng.integers(0, 9, size=len(pool))
            ballots = [(int(k), [list(tier) for tier in r.tiers]) for k, r in zip(counts, pool)]
            t = MarginMatrix(cands, np.array([[margin(ballots, x, y) for y in cands] for x in cands]))
        else:
            t = random_target(rng, 3, bound=5)
        out.append((t, pool))
    return out, cands, cap
