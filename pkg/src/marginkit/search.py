"""Bounded searches for axiom violations.

Three strategies share one per-profile instance check:

* ``exhaustive``: every profile with 1..max_voters ballots over 2..max_candidates
  candidates, candidates ascending, then voters ascending, then profiles in
  canonical order. The first hit is minimal by (candidates, voters).
* ``random``: ``samples`` seeded random profiles; the hit with the smallest
  sample index is returned.
* ``mcgarvey``: every margin matrix with entries of one parity up to
  ``max_weight`` in absolute value, realized as a profile. Only meaningful for
  axioms that are decided by the margins of the base profile.

Work is split into chunks that are evaluated independently; with ``jobs > 1``
chunks run in worker processes and the earliest hit in the fixed chunk order
wins, so serial and parallel runs agree.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import axioms as ax
from .margins import MarginMatrix
from .methods import TieExplosion
from .profiles import Profile, enumerate_linear_orders, enumerate_weak_orders
from .synth import mcgarvey_debord_realize

SEARCH_MODES = ("exhaustive", "random", "mcgarvey")
CANDIDATE_LABELS = "abcdefghij"
_CHUNK = 2_000


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = 3
    max_voters: int = 9
    min_candidates: int = 2
    mode: str = "exhaustive"
    samples: int = 1_000
    seed: int = 0
    ballots: str = "linear"  # ranking domain of the base profiles
    delta_mode: str = "linear"  # ranking domain of added ballots
    n: int = 2  # added-ballot bound for n-resolvability
    max_weight: int = 5  # mcgarvey mode: largest |margin|
    max_instances: int | None = None  # stop after this many base profiles
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in SEARCH_MODES:
            raise ValueError(f"unknown search mode {self.mode!r}")
        if not 2 <= self.min_candidates <= self.max_candidates <= len(CANDIDATE_LABELS):
            raise ValueError("need 2 <= min_candidates <= max_candidates <= 10")
        if self.max_voters < 1 or self.samples < 0 or self.jobs < 1:
            raise ValueError("max_voters and jobs must be positive, samples non-negative")


@dataclass
class SearchResult:
    method: str
    axiom: str
    budget: SearchBudget
    witness: ax.ViolationWitness | None
    examined: int
    complete: bool  # True when the whole declared space was searched
    skipped: int = 0  # profiles a method could not evaluate (tie explosion)
    notes: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.witness is not None

    def summary(self) -> str:
        head = f"{self.method} / {self.axiom} [{self.budget.mode}, seed={self.budget.seed}]"
        if self.found:
            return f"{head}: violation found after {self.examined} profiles: {self.witness.describe()}"
        scope = "searched space exhausted" if self.complete else "budget exhausted"
        return f"{head}: no violation found ({scope}, {self.examined} profiles)"


def _domain(cands, mode):
    return enumerate_linear_orders(cands) if mode == "linear" else enumerate_weak_orders(cands)


def instance_violation(method: str, axiom: str, p: Profile, budget: SearchBudget) -> ax.Verdict | None:
    """First violation of ``axiom`` at base profile ``p``, trying every relevant added ballot."""
    if axiom == "condorcet-winner":
        v = ax.check_condorcet_winner(method, p)
    elif axiom == "condorcet-loser":
        v = ax.check_condorcet_loser(method, p)
    elif axiom == "quasi-resoluteness":
        v = ax.check_quasi_resoluteness(method, p)
    elif axiom == "block-preservation":
        v = ax.check_block_preservation(method, p)
    elif axiom == "resolvability":
        v = ax.check_resolvability(method, p, budget.delta_mode)
    elif axiom == "n-resolvability":
        v = ax.check_n_voter_resolvability(method, p, budget.n, budget.delta_mode, bound=max(budget.n, ax.DEFAULT_N_BOUND))
    elif axiom == "independence-of-clones":
        for C in ax.all_clone_sets(p):
            for c in sorted(C):
                v = ax.check_independence_of_clones(method, p, c, C)
                if not v:
                    return v
        return None
    elif axiom == "bullet-vote-positive-involvement":
        for x in p.candidates:
            v = ax.check_bullet_vote_positive_involvement(method, p, ax.bullet_ballot(p.candidates, x))
            if not v:
                return v
        return None
    else:
        checks = {
            "positive-involvement": (ax.check_positive_involvement_instance, lambda r: r.top() is not None),
            "strict-positive-involvement": (ax.check_strict_positive_involvement, lambda r: r.top() is not None),
            "negative-involvement": (ax.check_negative_involvement_instance, lambda r: r.bottom() is not None),
            "positive-negative-involvement": (
                ax.check_positive_negative_involvement,
                lambda r: r.top() is not None and r.bottom() is not None and r.top() != r.bottom(),
            ),
        }
        if axiom not in checks:
            raise ValueError(f"unknown axiom {axiom!r}")
        check, shape = checks[axiom]
        for b in _domain(p.candidates, budget.delta_mode):
            if shape(b):
                v = check(method, p, b)
                if not v:
                    return v
        return None
    return None if v else v


def _exhaustive_levels(budget: SearchBudget):
    for m in range(budget.min_candidates, budget.max_candidates + 1):
        cands = tuple(CANDIDATE_LABELS[:m])
        dom = _domain(cands, budget.ballots)
        for v in range(1, budget.max_voters + 1):
            yield cands, dom, v


def _exhaustive_profiles(budget: SearchBudget):
    for cands, dom, v in _exhaustive_levels(budget):
        for combo in itertools.combinations_with_replacement(range(len(dom)), v):
            counts: dict = {}
            for i in combo:
                counts[dom[i]] = counts.get(dom[i], 0) + 1
            yield Profile(cands, tuple(counts.items()))


def _random_profiles(budget: SearchBudget):
    rng = np.random.default_rng(budget.seed)
    domains = {}
    for _ in range(budget.samples):
        m = int(rng.integers(budget.min_candidates, budget.max_candidates + 1))
        cands = tuple(CANDIDATE_LABELS[:m])
        dom = domains.setdefault(m, _domain(cands, budget.ballots))
        v = int(rng.integers(1, budget.max_voters + 1))
        picks = rng.integers(0, len(dom), size=v)
        counts: dict = {}
        for i in picks:
            counts[dom[i]] = counts.get(dom[i], 0) + 1
        yield Profile(cands, tuple(counts.items()))


def _mcgarvey_profiles(budget: SearchBudget):
    for m in range(budget.min_candidates, budget.max_candidates + 1):
        cands = tuple(CANDIDATE_LABELS[:m])
        pairs = list(itertools.combinations(range(m), 2))
        for parity in (1, 0):
            vals = [w for w in range(-budget.max_weight, budget.max_weight + 1) if w % 2 == parity]
            for ws in itertools.product(vals, repeat=len(pairs)):
                t = np.zeros((m, m), dtype=np.int64)
                for (i, j), w in zip(pairs, ws):
                    t[i, j], t[j, i] = w, -w
                yield mcgarvey_debord_realize(MarginMatrix(cands, t))


def _candidates(budget: SearchBudget):
    gen = {"exhaustive": _exhaustive_profiles, "random": _random_profiles, "mcgarvey": _mcgarvey_profiles}
    it = gen[budget.mode](budget)
    if budget.max_instances is not None:
        it = itertools.islice(it, budget.max_instances)
    return it


def _scan(args):
    method, axiom, budget, profiles = args
    skipped = 0
    for k, p in enumerate(profiles):
        try:
            v = instance_violation(method, axiom, p, budget)
        except TieExplosion:
            skipped += 1
            continue
        if v is not None:
            return k, v.witness, skipped
    return None, None, skipped


def _chunks(it, size):
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def hunt_violations(method: str, axiom: str, budget: SearchBudget = SearchBudget()) -> SearchResult:
    if axiom not in ax.AXIOM_IDS:
        raise ValueError(f"unknown axiom {axiom!r}")
    examined = 0
    skipped = 0
    stream = _candidates(budget)

    def finish(witness, complete):
        return SearchResult(method, axiom, budget, witness, examined, complete, skipped)

    if budget.jobs == 1:
        for block in _chunks(stream, _CHUNK):
            k, w, s = _scan((method, axiom, budget, block))
            skipped += s
            if w is not None:
                examined += k + 1
                return finish(w, False)
            examined += len(block)
    else:
        with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
            blocks = _chunks(stream, _CHUNK)
            while True:
                wave = list(itertools.islice(blocks, budget.jobs))
                if not wave:
                    break
                results = list(pool.map(_scan, [(method, axiom, budget, b) for b in wave]))
                for block, (k, w, s) in zip(wave, results):
                    skipped += s
                    if w is not None:
                        examined += k + 1
                        return finish(w, False)
                    examined += len(block)
    complete = budget.mode != "random" and budget.max_instances is None
    return finish(None, complete)


def sweep(method: str, axiom: str, samples: int, seed: int = 0, **kw) -> SearchResult:
    """Random-instance evidence run; ``found`` False means no counterexample in the sample."""
    return hunt_violations(method, axiom, SearchBudget(mode="random", samples=samples, seed=seed, **kw))
