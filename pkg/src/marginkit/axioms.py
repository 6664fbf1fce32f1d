"""Instance checkers for the voting axioms.

Every checker returns a ``Verdict``. A verdict is truthy when the instance
passes; ``vacuous`` marks passes where the axiom's antecedent does not apply.
Violations carry a ``ViolationWitness`` that replays through ``replay_witness``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .margins import MarginMatrix, ballot_effect, condorcet_loser, condorcet_winner, margin_matrix, uniquely_weighted
from .methods import get_method
from .profiles import (
    Profile,
    ProfileError,
    Ranking,
    add_ballots,
    block_of_all_linear_orders,
    enumerate_linear_orders,
    enumerate_weak_orders,
    remove_candidate,
)

AXIOM_IDS = (
    "condorcet-winner",
    "condorcet-loser",
    "positive-involvement",
    "negative-involvement",
    "resolvability",
    "n-resolvability",
    "quasi-resoluteness",
    "strict-positive-involvement",
    "independence-of-clones",
    "block-preservation",
    "positive-negative-involvement",
    "bullet-vote-positive-involvement",
)

DEFAULT_N_BOUND = 3

Method = Callable[[Profile | MarginMatrix], frozenset]


@dataclass(frozen=True)
class ViolationWitness:
    axiom: str
    method: str
    base: Profile
    before: frozenset
    after: frozenset
    focus: str | None = None
    delta: Profile | None = None
    removed: str | None = None
    clones: frozenset | None = None
    mode: str = "linear"
    n: int = 1

    def describe(self) -> str:
        parts = [f"{self.method} violates {self.axiom}"]
        if self.focus is not None:
            parts.append(f"focus={self.focus}")
        parts.append(f"before={sorted(self.before)}")
        if self.delta is not None:
            parts.append("delta=" + ", ".join(f"{k}x{r}" for r, k in self.delta.ballots))
        if self.removed is not None:
            parts.append(f"removed={self.removed}")
        parts.append(f"after={sorted(self.after)}")
        return " ".join(parts)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    vacuous: bool = False
    witness: ViolationWitness | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)
VACUOUS = Verdict(True, vacuous=True)


def _method(f: str | Method) -> tuple[str, Method]:
    if isinstance(f, str):
        return f, get_method(f)
    return getattr(f, "__name__", "custom"), f


def _ranking(b: Ranking | str) -> Ranking:
    return b if isinstance(b, Ranking) else Ranking.parse(b)


def ballot_domain(candidates: Iterable[str], mode: str) -> list[Ranking]:
    if mode == "linear":
        return enumerate_linear_orders(candidates)
    if mode == "weak":
        return enumerate_weak_orders(candidates)
    raise ValueError(f"unknown ballot mode {mode!r}")


def check_condorcet_winner(f: str | Method, p: Profile) -> Verdict:
    name, fn = _method(f)
    cw = condorcet_winner(p)
    if cw is None:
        return VACUOUS
    w = fn(p)
    if w == {cw}:
        return PASS
    return Verdict(False, witness=ViolationWitness("condorcet-winner", name, p, w, w, focus=cw))


def check_condorcet_loser(f: str | Method, p: Profile) -> Verdict:
    name, fn = _method(f)
    cl = condorcet_loser(p)
    if cl is None:
        return VACUOUS
    w = fn(p)
    if cl not in w:
        return PASS
    return Verdict(False, witness=ViolationWitness("condorcet-loser", name, p, w, w, focus=cl))


def check_positive_involvement_instance(f: str | Method, p: Profile, b: Ranking | str) -> Verdict:
    name, fn = _method(f)
    b = _ranking(b)
    x = b.top()
    if x is None:
        raise ProfileError(f"ballot {b} does not rank a candidate uniquely first")
    before = fn(p)
    if x not in before:
        return VACUOUS
    q = add_ballots(p, b)
    after = fn(q)
    if x in after:
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "positive-involvement", name, p, before, after, focus=x, delta=Profile.single(b)))


def check_negative_involvement_instance(f: str | Method, p: Profile, b: Ranking | str) -> Verdict:
    name, fn = _method(f)
    b = _ranking(b)
    x = b.bottom()
    if x is None:
        raise ProfileError(f"ballot {b} does not rank a candidate uniquely last")
    before = fn(p)
    if x in before:
        return VACUOUS
    after = fn(add_ballots(p, b))
    if x not in after:
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "negative-involvement", name, p, before, after, focus=x, delta=Profile.single(b)))


def check_strict_positive_involvement(f: str | Method, p: Profile, b: Ranking | str) -> Verdict:
    name, fn = _method(f)
    b = _ranking(b)
    x = b.top()
    if x is None:
        raise ProfileError(f"ballot {b} does not rank a candidate uniquely first")
    before = fn(p)
    if x not in before:
        return VACUOUS
    after = fn(add_ballots(p, b))
    if after == {x}:
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "strict-positive-involvement", name, p, before, after, focus=x, delta=Profile.single(b)))


def check_positive_negative_involvement(f: str | Method, p: Profile, b: Ranking | str) -> Verdict:
    """Adding b (x uniquely first, y uniquely last) must not make x lose and y win."""
    name, fn = _method(f)
    b = _ranking(b)
    x, y = b.top(), b.bottom()
    if x is None or y is None or x == y:
        raise ProfileError(f"ballot {b} needs a unique top and a distinct unique bottom")
    before = fn(p)
    if x not in before or y in before:
        return VACUOUS
    after = fn(add_ballots(p, b))
    if not (x not in after and y in after):
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "positive-negative-involvement", name, p, before, after, focus=x, delta=Profile.single(b)))


def bullet_ballot(candidates: Iterable[str], x: str) -> Ranking:
    """x alone on top, every other candidate tied below (the 'unranked' reading)."""
    rest = tuple(c for c in candidates if c != x)
    return Ranking(((x,), rest) if rest else ((x,),))


def check_bullet_vote_positive_involvement(f: str | Method, p: Profile, b: Ranking | str) -> Verdict:
    name, fn = _method(f)
    b = _ranking(b)
    x = b.top()
    if x is None or len(b.tiers) > 2:
        raise ProfileError(f"{b} is not a bullet ballot")
    before = fn(p)
    if x not in before:
        return VACUOUS
    after = fn(add_ballots(p, b))
    if x in after:
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "bullet-vote-positive-involvement", name, p, before, after, focus=x, delta=Profile.single(b)))


def _delta_effects(candidates: tuple[str, ...], n: int, mode: str):
    """Distinct margin effects of multisets of 1..n ballots, with one representative each."""
    dom = ballot_domain(candidates, mode)
    effects: dict[bytes, tuple] = {}
    for size in range(1, n + 1):
        for combo in itertools.combinations_with_replacement(range(len(dom)), size):
            eff = sum(ballot_effect(dom[i], candidates) for i in combo)
            key = eff.tobytes()
            if key not in effects:
                effects[key] = (eff, combo)
    return dom, list(effects.values())


def check_n_voter_resolvability(
    f: str | Method, p: Profile, n: int = 1, mode: str = "linear", bound: int = DEFAULT_N_BOUND
) -> Verdict:
    """Every tied winner can be made the unique winner by adding at most n ballots.

    Ballot multisets are deduplicated by their margin effect, which is exact for
    the margin-determined methods here.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > bound:
        raise ValueError(f"n={n} exceeds the configured bound {bound}")
    name, fn = _method(f)
    before = fn(p)
    if len(before) <= 1:
        return VACUOUS
    mm = margin_matrix(p)
    dom, effects = _delta_effects(p.candidates, n, mode)
    reachable: set = set()
    for eff, combo in effects:
        w = fn(MarginMatrix(p.candidates, mm.m + eff))
        if len(w) == 1:
            reachable |= w
            if reachable >= before:
                return PASS
    stuck = sorted(before - reachable)[0]
    axiom = "resolvability" if n == 1 else "n-resolvability"
    return Verdict(False, witness=ViolationWitness(
        axiom, name, p, before, before, focus=stuck, mode=mode, n=n))


def check_resolvability(f: str | Method, p: Profile, mode: str = "linear") -> Verdict:
    return check_n_voter_resolvability(f, p, 1, mode)


def check_quasi_resoluteness(f: str | Method, p: Profile) -> Verdict:
    name, fn = _method(f)
    if not uniquely_weighted(p):
        return VACUOUS
    w = fn(p)
    if len(w) == 1:
        return PASS
    return Verdict(False, witness=ViolationWitness("quasi-resoluteness", name, p, w, w))


def is_clone_set(p: Profile, clones: Iterable[str]) -> bool:
    C = frozenset(clones)
    X = frozenset(p.candidates)
    if not C <= X:
        raise ProfileError(f"{sorted(C - X)} not in the profile")
    if len(C) < 2 or C == X:
        return False
    for r, _ in p.ballots:
        rk = r.rank_of
        lo = min(rk[c] for c in C)
        hi = max(rk[c] for c in C)
        for x in X - C:
            if not (rk[x] < lo or rk[x] > hi):
                return False
    return True


def all_clone_sets(p: Profile) -> list[frozenset]:
    X = p.candidates
    return [
        frozenset(C)
        for k in range(2, len(X))
        for C in itertools.combinations(X, k)
        if is_clone_set(p, C)
    ]


def detect_clone_sets(p: Profile) -> list[frozenset]:
    """Inclusion-maximal clone sets, largest first."""
    sets = all_clone_sets(p)
    maximal = [C for C in sets if not any(C < D for D in sets)]
    return sorted(maximal, key=lambda C: (-len(C), sorted(C)))


def check_independence_of_clones(
    f: str | Method, p: Profile, c: str, clones: Iterable[str]
) -> Verdict:
    name, fn = _method(f)
    C = frozenset(clones)
    if c not in C or not is_clone_set(p, C):
        raise ProfileError(f"{sorted(C)} is not a clone set containing {c!r}")
    before = fn(p)
    q = remove_candidate(p, c)
    after = fn(q)
    same_outside = all((x in before) == (x in after) for x in p.candidates if x not in C)
    same_inside = bool(C & before) == bool(C & after)
    if same_outside and same_inside:
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "independence-of-clones", name, p, before, after, removed=c, clones=C))


def check_block_preservation(f: str | Method, p: Profile) -> Verdict:
    name, fn = _method(f)
    before = fn(p)
    block = block_of_all_linear_orders(p.candidates, 1)
    after = fn(p + block)
    if before <= after:
        return PASS
    return Verdict(False, witness=ViolationWitness(
        "block-preservation", name, p, before, after, delta=block))


def replay_witness(w: ViolationWitness, f: Method | None = None) -> Verdict:
    """Re-run the instance checker a witness was produced by."""
    fn = f if f is not None else w.method
    if w.axiom == "condorcet-winner":
        return check_condorcet_winner(fn, w.base)
    if w.axiom == "condorcet-loser":
        return check_condorcet_loser(fn, w.base)
    if w.axiom in ("resolvability", "n-resolvability"):
        return check_n_voter_resolvability(fn, w.base, w.n, w.mode, bound=max(w.n, DEFAULT_N_BOUND))
    if w.axiom == "quasi-resoluteness":
        return check_quasi_resoluteness(fn, w.base)
    if w.axiom == "block-preservation":
        return check_block_preservation(fn, w.base)
    if w.axiom == "independence-of-clones":
        return check_independence_of_clones(fn, w.base, w.removed, w.clones)
    single = {
        "positive-involvement": check_positive_involvement_instance,
        "negative-involvement": check_negative_involvement_instance,
        "strict-positive-involvement": check_strict_positive_involvement,
        "positive-negative-involvement": check_positive_negative_involvement,
        "bullet-vote-positive-involvement": check_bullet_vote_positive_involvement,
    }
    if w.axiom in single:
        (b, _), = w.delta.ballots
        return single[w.axiom](fn, w.base, b)
    raise ValueError(f"unknown axiom {w.axiom!r}")
