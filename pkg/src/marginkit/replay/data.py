"""Profiles, delta steps and margin graphs for the two five-candidate proof sequences.

Family ``P`` is the sequence P1..P5 used for the main impossibility; family ``Q``
is Q1..Q5 used for the clone variant. Each step lists the ballots added to or
removed from the previous stage, and the candidate the step is about: in the
positive-involvement reading every step ballot ranks that candidate uniquely
first.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..margins import MarginMatrix
from ..profiles import Profile, Ranking

CANDIDATES = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class Step:
    """Stage i -> i+1: ``sign`` +1 adds the ballots, -1 removes them."""

    sign: int
    ballots: tuple[tuple[int, str], ...]
    focus: str

    def reversed(self) -> Step:
        """Same margin change, realized by the opposite operation on reversed rankings."""
        return Step(-self.sign, tuple((k, str(Ranking.parse(r).reversed())) for k, r in self.ballots), self.focus)


@dataclass(frozen=True)
class Family:
    name: str
    base: tuple[tuple[int, str], ...]
    steps: tuple[Step, ...]
    edges: tuple[dict, ...]  # one margin graph per stage
    shading: tuple[frozenset, ...]  # defensible set per stage

    def base_profile(self) -> Profile:
        return Profile.from_counts(CANDIDATES, list(self.base))

    def expected(self, stage: int) -> MarginMatrix:
        """Stage numbers are 1-based, as in P1..P5."""
        return MarginMatrix.from_edges(CANDIDATES, self.edges[stage - 1])


def _edges(text: str) -> dict:
    out = {}
    for tok in text.split():
        pair, w = tok.split("=")
        out[(pair[0], pair[1])] = int(w)
    return out


P_FAMILY = Family(
    name="P",
    base=((69, "daceb"), (64, "ebacd"), (46, "bcaed"), (20, "cdeba"), (18, "dbace"), (2, "edcba")),
    steps=(
        Step(+1, ((26, "adbec"),), "a"),
        Step(-1, ((7, "daceb"),), "d"),
        Step(+1, ((23, "bdeac"),), "b"),
        Step(-1, ((7, "dbace"),), "d"),
    ),
    edges=(
        _edges("ac=83 ad=1 ae=47 ba=81 bc=37 bd=1 cd=41 ce=87 eb=91 ed=5"),
        _edges("ac=109 ad=27 ae=73 ba=55 bc=63 cd=15 ce=61 db=25 de=21 eb=65"),
        _edges("ac=102 ad=34 ae=66 ba=62 bc=70 cd=22 ce=54 db=18 de=14 eb=58"),
        _edges("ac=125 ad=11 ae=43 ba=85 bc=93 bd=5 ce=31 dc=1 de=37 eb=35"),
        _edges("ac=118 ad=18 ae=36 ba=78 bc=86 bd=12 cd=6 ce=24 de=30 eb=42"),
    ),
    shading=tuple(frozenset(s) for s in ("ad", "abd", "bd", "bd", "d")),
)

Q_FAMILY = Family(
    name="Q",
    base=((62, "dbaec"), (60, "cbaed"), (42, "deacb"), (23, "aecbd"), (19, "ecbad"), (3, "cebad")),
    steps=(
        Step(+1, ((16, "adbce"), (7, "aedbc"), (2, "aebdc")), "a"),
        Step(-1, ((5, "deacb"),), "d"),
        Step(+1, ((20, "bdcae"),), "b"),
        Step(-1, ((11, "dbaec"),), "d"),
    ),
    edges=(
        _edges("ac=45 ad=1 ae=81 ba=79 bd=1 be=35 cb=85 cd=1 ec=83 ed=1"),
        _edges("ac=70 ad=26 ae=106 ba=54 be=42 cb=60 db=20 dc=24 de=6 ec=76"),
        _edges("ac=65 ad=31 ae=111 ba=59 be=47 cb=55 db=15 dc=19 de=1 ec=71"),
        _edges("ac=45 ad=11 ae=131 ba=79 bd=5 be=67 cb=35 dc=39 de=21 ec=51"),
        _edges("ac=34 ad=22 ae=120 ba=68 bd=16 be=56 cb=46 dc=28 de=10 ec=40"),
    ),
    shading=tuple(frozenset(s) for s in ("ad", "abd", "bd", "bd", "d")),
)

FAMILIES = {"P": P_FAMILY, "Q": Q_FAMILY}

# Copies of every linear order added to the first stage in the negative-involvement replays.
NI_BLOCK_COPIES = 147
# Lower bound on copies of every linear order at stages 3 and 5 after the reversed-ranking removals.
NI_AVAILABILITY = 121

Q_CLONES = frozenset("abce")
Q_REMOVED = "b"


def base_profile(name: str) -> Profile:
    """``"P1"`` or ``"Q1"``."""
    fam = FAMILIES.get(name[:1])
    if fam is None or name[1:] != "1":
        raise KeyError(f"unknown base profile {name!r}; use P1 or Q1")
    return fam.base_profile()


def mutations(fam: Family) -> list[tuple[str, Family]]:
    """Single-count perturbations (+1 and -1) of every base column and every step count."""
    out = []
    for i, (k, r) in enumerate(fam.base):
        for d in (+1, -1):
            base = list(fam.base)
            base[i] = (k + d, r)
            out.append((f"{fam.name}1 {r}: {k}->{k + d}", replace(fam, base=tuple(base))))
    for s, step in enumerate(fam.steps):
        for b, (k, r) in enumerate(step.ballots):
            for d in (+1, -1):
                ballots = list(step.ballots)
                ballots[b] = (k + d, r)
                steps = list(fam.steps)
                steps[s] = replace(step, ballots=tuple(ballots))
                out.append((f"step {s + 1}->{s + 2} {r}: {k}->{k + d}", replace(fam, steps=tuple(steps))))
    return out
