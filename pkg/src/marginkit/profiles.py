"""Rankings (strict weak orders), anonymous profiles, and profile arithmetic."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class ProfileError(ValueError):
    """Raised when a ranking or profile violates its invariants."""


class InsufficientBallots(ProfileError):
    """A removal asked for more copies of a ranking than the profile holds."""

    def __init__(self, ranking: "Ranking", wanted: int, available: int):
        self.ranking = ranking
        self.wanted = wanted
        self.available = available
        super().__init__(
            f"cannot remove {wanted} x {ranking}: only {available} present"
        )


def _check_labels(labels: Iterable[str]) -> tuple[str, ...]:
    out = tuple(sorted(labels))
    for c in out:
        if not isinstance(c, str) or not c or any(ch in c for ch in ",|:>~ \t"):
            raise ProfileError(f"bad candidate label {c!r}")
    if len(set(out)) != len(out):
        raise ProfileError(f"duplicate candidates in {out}")
    return out


@dataclass(frozen=True, order=True)
class Ranking:
    """A strict weak order stored as tiers, best tier first.

    Tiers are kept sorted by label so that equal orders compare and hash equal.
    """

    tiers: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        tiers = tuple(tuple(sorted(t)) for t in self.tiers)
        if not tiers or any(not t for t in tiers):
            raise ProfileError("ranking needs at least one tier and no empty tiers")
        flat = [c for t in tiers for c in t]
        if len(set(flat)) != len(flat):
            raise ProfileError(f"tiers overlap in {tiers}")
        object.__setattr__(self, "tiers", tiers)

    @classmethod
    def linear(cls, order: Iterable[str]) -> Ranking:
        return cls(tuple((c,) for c in order))

    @classmethod
    def parse(cls, text: str) -> Ranking:
        """Parse ``"daceb"``, ``"d>a>c"``, ``"a,b>c"`` or ``"a~b>c"``.

        A string without separators is read as a linear order of one-letter labels.
        """
        text = text.strip()
        if not text:
            raise ProfileError("empty ranking")
        if ">" not in text and "," not in text and "~" not in text and "|" not in text:
            return cls.linear(text)
        sep = "|" if "|" in text else ">"
        tiers = []
        for chunk in text.split(sep):
            names = [s.strip() for s in chunk.replace("~", ",").split(",")]
            tiers.append(tuple(n for n in names if n))
        return cls(tuple(tiers))

    @cached_property
    def candidates(self) -> frozenset[str]:
        return frozenset(c for t in self.tiers for c in t)

    @cached_property
    def rank_of(self) -> dict[str, int]:
        return {c: i for i, t in enumerate(self.tiers) for c in t}

    @property
    def is_linear(self) -> bool:
        return all(len(t) == 1 for t in self.tiers)

    def prefers(self, x: str, y: str) -> bool:
        r = self.rank_of
        return r[x] < r[y]

    def top(self) -> str | None:
        """The uniquely first candidate, if there is one."""
        return self.tiers[0][0] if len(self.tiers[0]) == 1 else None

    def bottom(self) -> str | None:
        """The uniquely last candidate, if there is one."""
        return self.tiers[-1][0] if len(self.tiers[-1]) == 1 else None

    def reversed(self) -> Ranking:
        return Ranking(self.tiers[::-1])

    def restrict(self, keep: Iterable[str]) -> Ranking:
        keep = set(keep)
        return Ranking(tuple(t2 for t in self.tiers if (t2 := tuple(c for c in t if c in keep))))

    def __str__(self) -> str:
        if self.is_linear and all(len(t[0]) == 1 for t in self.tiers):
            return "".join(t[0] for t in self.tiers)
        return ">".join(",".join(t) for t in self.tiers)


def reverse_ranking(r: Ranking) -> Ranking:
    return r.reversed()


@dataclass(frozen=True)
class Profile:
    """Anonymous profile: a candidate set and a multiset of rankings.

    ``ballots`` is a sorted tuple of ``(ranking, count)`` pairs with distinct
    rankings and positive counts. There is always at least one voter.
    """

    candidates: tuple[str, ...]
    ballots: tuple[tuple[Ranking, int], ...]
    _counts: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        cands = _check_labels(self.candidates)
        object.__setattr__(self, "candidates", cands)
        merged: Counter = Counter()
        cset = frozenset(cands)
        for r, k in self.ballots:
            if not isinstance(r, Ranking):
                r = Ranking.parse(r)
            if r.candidates != cset:
                raise ProfileError(f"ranking {r} is not over {cands}")
            if int(k) != k or k <= 0:
                raise ProfileError(f"count for {r} must be a positive integer, got {k}")
            merged[r] += int(k)
        if not merged:
            raise ProfileError("a profile needs at least one voter")
        ballots = tuple(sorted(merged.items()))
        object.__setattr__(self, "ballots", ballots)
        object.__setattr__(self, "_counts", dict(ballots))

    @classmethod
    def from_counts(
        cls, candidates: Iterable[str], counts: Mapping[Ranking | str, int] | Iterable
    ) -> Profile:
        """Build from ``{ranking: count}`` or ``[(count, ranking), ...]``.

        Zero counts are dropped; rankings may be given as strings.
        """
        items = counts.items() if isinstance(counts, Mapping) else [(r, k) for k, r in counts]
        ballots = []
        for r, k in items:
            if k == 0:
                continue
            ballots.append((r if isinstance(r, Ranking) else Ranking.parse(r), k))
        return cls(tuple(candidates), tuple(ballots))

    @classmethod
    def single(cls, ranking: Ranking | str, count: int = 1) -> Profile:
        r = ranking if isinstance(ranking, Ranking) else Ranking.parse(ranking)
        return cls(tuple(r.candidates), ((r, count),))

    @property
    def num_voters(self) -> int:
        return sum(k for _, k in self.ballots)

    @property
    def is_linear(self) -> bool:
        return all(r.is_linear for r, _ in self.ballots)

    def count(self, r: Ranking | str) -> int:
        if not isinstance(r, Ranking):
            r = Ranking.parse(r)
        return self._counts.get(r, 0)

    def __add__(self, other: Profile) -> Profile:
        return add_profiles(self, other)

    def __iter__(self) -> Iterator[tuple[Ranking, int]]:
        return iter(self.ballots)

    def __len__(self) -> int:
        return len(self.ballots)

    def __str__(self) -> str:
        body = ", ".join(f"{k}x{r}" for r, k in self.ballots)
        return f"Profile[{','.join(self.candidates)}]({body})"


def add_profiles(p: Profile, q: Profile) -> Profile:
    if p.candidates != q.candidates:
        raise ProfileError(f"candidate sets differ: {p.candidates} vs {q.candidates}")
    return Profile(p.candidates, p.ballots + q.ballots)


def add_ballots(p: Profile, r: Ranking | str, k: int = 1) -> Profile:
    """``p`` plus ``k`` copies of ``r``; ``k == 0`` returns ``p``."""
    if k == 0:
        return p
    if k < 0:
        raise ProfileError("use remove_ballots for negative changes")
    r = r if isinstance(r, Ranking) else Ranking.parse(r)
    return Profile(p.candidates, p.ballots + ((r, k),))


def remove_ballots(p: Profile, r: Ranking | str, k: int) -> Profile:
    r = r if isinstance(r, Ranking) else Ranking.parse(r)
    if k <= 0:
        raise ProfileError(f"removal count must be positive, got {k}")
    have = p.count(r)
    if have < k:
        raise InsufficientBallots(r, k, have)
    counts = dict(p.ballots)
    counts[r] = have - k
    return Profile.from_counts(p.candidates, counts)


def scale_profile(p: Profile, n: int) -> Profile:
    if n < 1:
        raise ProfileError(f"scale factor must be positive, got {n}")
    return Profile(p.candidates, tuple((r, k * n) for r, k in p.ballots))


def remove_candidate(p: Profile, c: str) -> Profile:
    if c not in p.candidates:
        raise ProfileError(f"unknown candidate {c!r}")
    if len(p.candidates) < 2:
        raise ProfileError("cannot remove the last candidate")
    keep = [x for x in p.candidates if x != c]
    return Profile(tuple(keep), tuple((r.restrict(keep), k) for r, k in p.ballots))


def enumerate_linear_orders(xs: Iterable[str]) -> list[Ranking]:
    xs = _check_labels(xs)
    if not xs:
        raise ProfileError("need at least one candidate")
    return [Ranking.linear(p) for p in itertools.permutations(xs)]


def _ordered_partitions(xs: Sequence[str]) -> Iterator[tuple[tuple[str, ...], ...]]:
    # choose the first tier as any nonempty subset, recurse on the rest
    if not xs:
        yield ()
        return
    for size in range(1, len(xs) + 1):
        for first in itertools.combinations(xs, size):
            rest = [x for x in xs if x not in first]
            for tail in _ordered_partitions(rest):
                yield (first,) + tail


def enumerate_weak_orders(xs: Iterable[str]) -> list[Ranking]:
    xs = _check_labels(xs)
    if not xs:
        raise ProfileError("need at least one candidate")
    return sorted(Ranking(t) for t in _ordered_partitions(xs))


def fubini(n: int) -> int:
    """Number of weak orders on ``n`` labelled items."""
    return sum(
        (-1) ** (k - j) * math.comb(k, j) * j**n for k in range(n + 1) for j in range(k + 1)
    )


def block_of_all_linear_orders(xs: Iterable[str], copies: int = 1) -> Profile:
    if copies < 1:
        raise ProfileError("copies must be positive")
    orders = enumerate_linear_orders(xs)
    return Profile(tuple(orders[0].candidates), tuple((r, copies) for r in orders))
