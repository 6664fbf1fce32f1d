"""Mechanical replay of the combinatorial facts behind the five impossibility proofs.

A replay rebuilds the five stage profiles of a family, compares their margins
with the expected graphs, and checks every defensibility / separation /
Condorcet / availability fact the argument leans on. Facts about "any added
voter" are checked over the full delta space. The method-level inferences of the
proofs (which quantify over all voting methods) are not re-derived.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..axioms import is_clone_set
from ..margins import (
    MarginMatrix,
    condorcet_loser,
    condorcet_winner,
    defensible_mask,
    defensible_set,
    margin_matrix,
    margin_separation_holds,
    min_weight_gap,
    separation_mask,
)
from ..profiles import (
    InsufficientBallots,
    Profile,
    Ranking,
    add_ballots,
    block_of_all_linear_orders,
    enumerate_linear_orders,
    remove_ballots,
    remove_candidate,
    scale_profile,
)
from .data import (
    CANDIDATES,
    FAMILIES,
    NI_AVAILABILITY,
    NI_BLOCK_COPIES,
    P_FAMILY,
    Q_CLONES,
    Q_FAMILY,
    Q_REMOVED,
    Family,
)
from ..synth import mcgarvey_debord_realize, pad_with_blocks
from .quantify import DeltaSpace

DEFAULT_N_BOUND = 3
LITERAL_LIMIT = 2_000_000
STAGE_GAPS = {3: 4, 5: 6}

# copies of every linear order guaranteed at stages 3 and 5 of the negative-involvement
# sequences: 147 minus the largest single removal of a reversed ranking
NI_MIN_COPIES = {"P": NI_AVAILABILITY, "Q": NI_BLOCK_COPIES - 20}


@dataclass
class StepAssertion:
    label: str
    kind: str
    passed: bool
    detail: dict = field(default_factory=dict)
    cardinality: int | None = None

    def key(self):
        return (self.label, self.kind, self.passed, json.dumps(self.detail, sort_keys=True), self.cardinality)


@dataclass
class ReplayReport:
    theorem: str
    assertions: list[StepAssertion]
    elapsed: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def failures(self) -> list[StepAssertion]:
        return [a for a in self.assertions if not a.passed]

    def same_checks(self, other: ReplayReport) -> bool:
        return [a.key() for a in self.assertions] == [a.key() for a in other.assertions]

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "theorem": self.theorem,
            "config": self.config,
            "passed": self.passed,
            "assertions": [asdict(a) for a in self.assertions],
        }
        if timing:
            d["elapsed"] = round(self.elapsed, 3)
        return d

    def to_text(self, timing: bool = False) -> str:
        cfg = " ".join(f"{k}={v}" for k, v in self.config.items())
        head = f"{self.theorem} [{cfg}]: {'VERIFIED' if self.passed else 'FAILED'}"
        if timing:
            head += f" ({self.elapsed:.2f}s)"
        lines = [head]
        for a in self.assertions:
            card = f" [{a.cardinality} cases]" if a.cardinality is not None else ""
            lines.append(f"  {'PASS' if a.passed else 'FAIL'} {a.kind}: {a.label}{card}")
            if not a.passed and a.detail:
                lines.append(f"       {json.dumps(a.detail, sort_keys=True)}")
        return "\n".join(lines)


def _mismatches(got: MarginMatrix, want: MarginMatrix) -> list:
    c = got.candidates
    return [
        [c[i], c[j], int(got.m[i, j]), int(want.m[i, j])]
        for i in range(len(c))
        for j in range(len(c))
        if i < j and got.m[i, j] != want.m[i, j]
    ]


def _lemma_ballot_counts(p: Profile) -> np.ndarray:
    """``L[y, x]``: voters ranking y uniquely second-to-last and x uniquely last."""
    idx = {c: i for i, c in enumerate(p.candidates)}
    n = len(idx)
    L = np.zeros((n, n), dtype=np.int64)
    for r, k in p.ballots:
        if len(r.tiers) >= 2 and len(r.tiers[-1]) == 1 and len(r.tiers[-2]) == 1:
            L[idx[r.tiers[-2][0]], idx[r.tiers[-1][0]]] += k
    return L


def variant_lemma_mask(M: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Per matrix: every non-defensible x has a dominating y with at least k+1 usable ballots.

    y dominates x when margin(y, x) > margin(z, y) for every z (z = y included);
    k is the largest margin against y from another candidate.
    """
    n = M.shape[-1]
    colmax = M.max(axis=-2)  # includes z = y, so >= 0
    dominated = M > colmax[..., :, None]  # [.., y, x]
    offdiag = np.where(np.eye(n, dtype=bool), np.iinfo(M.dtype).min, M)
    k = offdiag.max(axis=-2)  # k[y] = max_{z != y} m[z, y]
    enough = (k[..., :, None] + 1) <= L
    nondef = ~defensible_mask(M)
    covered = np.any(dominated & enough, axis=-2)
    return np.all(~nondef | covered, axis=-1)


class _Replay:
    def __init__(self, fam: Family, variant: str, n: int, mode: str, blocks: int, base: Profile | None = None):
        self.base = base
        self.fam = fam
        self.variant = variant
        self.n = n
        self.mode = mode
        self.blocks = blocks
        self.out: list[StepAssertion] = []

    def add(self, label, kind, passed, detail=None, cardinality=None):
        self.out.append(StepAssertion(label, kind, bool(passed), detail or {}, cardinality))

    # stage construction ---------------------------------------------------------

    def build(self) -> list[Profile] | None:
        n = self.n
        p = scale_profile(self.base or self.fam.base_profile(), n)
        if self.variant == "ni":
            p = p + block_of_all_linear_orders(CANDIDATES, self.blocks * n)
        stages = [p]
        steps = self.fam.steps if self.variant == "pi" else [s.reversed() for s in self.fam.steps]
        self.steps = steps
        for s, step in enumerate(steps, start=1):
            for k, r in step.ballots:
                if step.sign > 0:
                    p = add_ballots(p, r, k * n)
                    continue
                have = p.count(r)
                label = f"stage {s}->{s + 1}: remove {k * n} x {r}"
                try:
                    p = remove_ballots(p, r, k * n)
                except InsufficientBallots as e:
                    self.add(label, "availability", False, {"have": e.available, "need": e.wanted})
                    return None
                self.add(label, "availability", True, {"have": have, "need": k * n})
            stages.append(p)
        return stages

    # individual checks ----------------------------------------------------------

    def margins(self, stages):
        for i, p in enumerate(stages, start=1):
            got = margin_matrix(p)
            want = self.fam.expected(i) * self.n
            bad = _mismatches(got, want)
            self.add(f"stage {i} margins equal the expected graph x{self.n}", "margin-equality",
                     not bad, {"mismatches": bad} if bad else {})

    def shading(self, stages):
        for i, p in enumerate(stages, start=1):
            got = defensible_set(p)
            want = self.fam.shading[i - 1]
            self.add(f"stage {i} defensible set is {{{','.join(sorted(want))}}}", "defensible-subset",
                     got == want, {} if got == want else {"got": sorted(got)})

    def delta_shapes(self):
        want_sign = (+1, -1, +1, -1) if self.variant == "pi" else (-1, +1, -1, +1)
        for s, step in enumerate(self.steps, start=1):
            if self.variant == "pi":
                where = [r for _, r in step.ballots if Ranking.parse(r).top() != step.focus]
                what = "uniquely first"
            else:
                where = [r for _, r in step.ballots if Ranking.parse(r).bottom() != step.focus]
                what = "uniquely last"
            ok = not where and step.sign == want_sign[s - 1]
            op = "added" if step.sign > 0 else "removed"
            self.add(f"stage {s}->{s + 1}: {op} ballots rank {step.focus} {what}", "delta-shape", ok,
                     {} if ok else {"offending": where, "sign": step.sign})

    def stage_one(self, stages):
        p1 = stages[0]
        self.add("stage 1 satisfies margin separation", "separation", margin_separation_holds(p1))
        if self.fam.name == "P":
            cl = condorcet_loser(p1)
            self.add("stage 1 Condorcet loser is d", "condorcet-status", cl == "d", {"got": cl})
            rest = defensible_set(p1) - {cl}
            self.add("stage 1: a is the only defensible candidate that is not the Condorcet loser",
                     "defensible-subset", rest == {"a"}, {"got": sorted(rest)})
        else:
            q1 = self.fam.base_profile()
            self.add("Q1: {a,b,c,e} is a set of clones", "clone-set", is_clone_set(q1, Q_CLONES))
            cw = condorcet_winner(remove_candidate(q1, Q_REMOVED))
            self.add("Q1 without b: Condorcet winner is a", "condorcet-status", cw == "a", {"got": cw})
            d1 = defensible_set(p1)
            self.add("stage 1 defensible set within {a,d}", "defensible-subset", d1 <= {"a", "d"},
                     {"got": sorted(d1)})
        if self.variant == "ni":
            L = _lemma_ballot_counts(p1)
            M = margin_matrix(p1).m[None]
            ok = bool(variant_lemma_mask(M, L)[0])
            self.add("stage 1 meets the negative-involvement lemma precondition", "availability", ok)

    def gaps(self, stages):
        for stage, gap in STAGE_GAPS.items():
            g = min_weight_gap(stages[stage - 1])
            self.add(f"stage {stage} distinct edge weights differ by >= {gap * self.n}", "separation",
                     g is not None and g >= gap * self.n, {"min_gap": g})

    def quantified(self, stages):
        space = DeltaSpace(CANDIDATES, self.mode, self.n)
        card = space.cardinality
        for stage, total, nd in ((3, self.n, 1), (5, 2 * self.n, 2)):
            p = stages[stage - 1]
            base = margin_matrix(p).m.astype(np.int32)
            expect = self.fam.shading[stage - 1]
            L = _lemma_ballot_counts(p) if self.variant == "ni" else None
            res = _sweep(base, space, nd, total, expect, exact=(stage == 5), L=L)
            who = "S2" if nd == 1 else "S2, S4"
            rel = "=" if stage == 5 else "within"
            cases = card**nd
            how = {"evaluation": res["evaluation"]}
            self.add(f"stage {stage} + {who}: defensible set {rel} {{{','.join(sorted(expect))}}}",
                     "quantified-over-deltas", res["defensible_fail"] == 0, {**how, **res["defensible_detail"]}, cases)
            self.add(f"stage {stage} + {who}: margin separation holds", "quantified-over-deltas",
                     res["separation_fail"] == 0, {**how, **res["separation_detail"]}, cases)
            if self.variant == "ni":
                bound = NI_MIN_COPIES[self.fam.name] * self.n
                lo = min(p.count(r) for r in enumerate_linear_orders(CANDIDATES))
                self.add(f"stage {stage} + {who}: every linear order has >= {bound} copies",
                         "availability", lo >= bound, {"min_copies": lo}, cases)
                self.add(f"stage {stage} + {who}: {bound} exceeds every margin", "availability",
                         res["max_margin"] < bound, {"max_margin": res["max_margin"]}, cases)
                self.add(f"stage {stage} + {who}: negative-involvement lemma precondition",
                         "quantified-over-deltas", res["lemma_fail"] == 0, {**how, **res["lemma_detail"]}, cases)

    def run(self) -> list[StepAssertion]:
        stages = self.build()
        if stages is None:
            self.add("stage sequence could not be built", "availability", False)
            return self.out
        self.delta_shapes()
        self.margins(stages)
        self.shading(stages)
        self.stage_one(stages)
        self.gaps(stages)
        self.quantified(stages)
        return self.out


# largest ballot count whose distinct effect sums are enumerated outright
DISTINCT_LIMIT = {"linear": 6, "weak": 3}


def _box_certificate(base, K: int, expect, exact: bool, L=None) -> dict:
    """Sound check for every perturbation E with |E_ij| <= K (any K ballots fit in this box).

    Each non-expected x needs a fixed attacker y that beats x under every
    perturbation; in exact mode each expected x needs, for every y, a
    guaranteed non-positive attack or a guaranteed counter-attack. Separation
    is certified when any two off-diagonal base entries that are not mirror
    images differ by at least 2K+2. A failure here means "not certified".
    """
    n = base.shape[0]
    B = base.astype(np.int64)
    off = ~np.eye(n, dtype=bool)
    res = {"evaluation": "interval-certificate", "max_margin": int(B.max()) + K,
           "defensible_fail": 0, "separation_fail": 0, "lemma_fail": 0,
           "defensible_detail": {}, "separation_detail": {}, "lemma_detail": {}}
    hi = np.where(off, B + K, 0)  # worst-case attack on y, z = y contributes 0
    best_attack_hi = hi.max(axis=0)
    kmax = np.where(off, B + K, np.iinfo(np.int64).min).max(axis=0)
    uncertified, lemma_bad = [], []
    for x in range(n):
        if CANDIDATES[x] in expect:
            continue
        ys = [y for y in range(n) if y != x and B[y, x] - K > best_attack_hi[y]]
        if not ys:
            uncertified.append(CANDIDATES[x])
        elif L is not None and not any(L[y, x] >= kmax[y] + 1 for y in ys):
            lemma_bad.append(CANDIDATES[x])
    if exact:
        lo = np.where(off, B - K, 0)
        for x in range(n):
            if CANDIDATES[x] not in expect:
                continue
            for y in range(n):
                if y != x and B[y, x] + K > 0 and not (lo[:, y].max() >= B[y, x] + K):
                    uncertified.append(CANDIDATES[x])
                    break
    if uncertified:
        res["defensible_fail"] = len(uncertified)
        res["defensible_detail"] = {"uncertified": uncertified}
    if lemma_bad:
        res["lemma_fail"] = len(lemma_bad)
        res["lemma_detail"] = {"uncertified": lemma_bad}
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    close = [
        [CANDIDATES[i] + CANDIDATES[j], CANDIDATES[k] + CANDIDATES[l]]
        for a, (i, j) in enumerate(cells)
        for (k, l) in cells[a + 1 :]
        if (k, l) != (j, i) and abs(B[i, j] - B[k, l]) < 2 * K + 2
    ]
    if close:
        res["separation_fail"] = len(close)
        res["separation_detail"] = {"too_close": close[:10]}
    return res


def _sweep(base, space: DeltaSpace, nd: int, total: int, expect, exact: bool, L=None) -> dict:
    """Evaluate every base + (sum of ``nd`` deltas) case.

    Small spaces are enumerated literally (every ordered tuple of deltas). Larger
    ones are reduced to the distinct margin effects of at most ``total`` ballots,
    which decides the same margin-only predicates.
    """
    n = base.shape[0]
    if space.cardinality**nd > LITERAL_LIMIT and total > DISTINCT_LIMIT[space.mode]:
        return _box_certificate(base, total, expect, exact, L)
    expect_mask = np.array([c in expect for c in CANDIDATES])
    literal = space.cardinality**nd <= LITERAL_LIMIT
    res = {"defensible_fail": 0, "separation_fail": 0, "lemma_fail": 0, "max_margin": int(base.max()),
           "defensible_detail": {}, "separation_detail": {}, "lemma_detail": {},
           "evaluated": 0, "evaluation": "literal" if literal else "distinct-effects"}

    def chunks():
        if literal:
            E = space.single_effects()
            if nd == 1:
                yield E
            else:
                for i in range(0, len(E), 32):
                    yield (E[i : i + 32, None] + E[None, :]).reshape(-1, n, n)
        else:
            yield from space.distinct_effect_chunks(total)

    for E in chunks():
        M = base[None] + E
        res["evaluated"] += len(M)
        D = defensible_mask(M)
        bad_d = np.any(D != expect_mask, axis=1) if exact else np.any(D & ~expect_mask, axis=1)
        sep = separation_mask(M)
        res["max_margin"] = max(res["max_margin"], int(M.max()))
        for key, bad in (("defensible", bad_d), ("separation", ~sep)):
            cnt = int(bad.sum())
            if cnt and not res[f"{key}_fail"]:
                i = int(np.argmax(bad))
                res[f"{key}_detail"] = {"delta_effect": E[i].tolist(),
                                        "defensible": [c for c, ok in zip(CANDIDATES, D[i]) if ok]}
            res[f"{key}_fail"] += cnt
        if L is not None:
            ok = variant_lemma_mask(M, L)
            cnt = int((~ok).sum())
            if cnt and not res["lemma_fail"]:
                res["lemma_detail"] = {"delta_effect": E[int(np.argmin(ok))].tolist()}
            res["lemma_fail"] += cnt
    for key in ("defensible", "separation", "lemma"):
        if res[f"{key}_fail"]:
            res[f"{key}_detail"]["failures"] = res[f"{key}_fail"]
    return res


def replay_family(fam: Family, variant: str = "pi", n: int = 1, mode: str = "weak",
                  blocks: int = NI_BLOCK_COPIES) -> list[StepAssertion]:
    if variant not in ("pi", "ni"):
        raise ValueError("variant must be 'pi' or 'ni'")
    return _Replay(fam, variant, n, mode, blocks).run()


def _report(theorem: str, fn, config: dict) -> ReplayReport:
    t0 = time.perf_counter()
    assertions = fn()
    return ReplayReport(theorem, assertions, time.perf_counter() - t0, config)


def _check_n(n: int, bound: int):
    if not 1 <= n <= bound:
        raise ValueError(f"n must be between 1 and {bound}, got {n}")


def verify_theorem1(delta_mode: str = "weak", data: Family = P_FAMILY) -> ReplayReport:
    return _report("thm1", lambda: replay_family(data, "pi", 1, delta_mode), {"mode": delta_mode})


def verify_theorem2(n: int, delta_mode: str = "linear", data: Family = P_FAMILY,
                    bound: int = DEFAULT_N_BOUND) -> ReplayReport:
    _check_n(n, bound)
    return _report(f"thm2(n={n})", lambda: replay_family(data, "pi", n, delta_mode),
                   {"mode": delta_mode, "n": n})


def verify_theorem3(delta_mode: str = "weak", data: Family = P_FAMILY,
                    blocks: int = NI_BLOCK_COPIES) -> ReplayReport:
    return _report("thm3", lambda: replay_family(data, "ni", 1, delta_mode, blocks),
                   {"mode": delta_mode, "blocks": blocks})


def verify_theorem4(n: int, delta_mode: str = "linear", data: Family = P_FAMILY,
                    blocks: int = NI_BLOCK_COPIES, bound: int = DEFAULT_N_BOUND) -> ReplayReport:
    _check_n(n, bound)
    return _report(f"thm4(n={n})", lambda: replay_family(data, "ni", n, delta_mode, blocks),
                   {"mode": delta_mode, "n": n, "blocks": blocks})


def verify_theorem5(variant: str = "pi", delta_mode: str = "weak", data: Family = Q_FAMILY,
                    n: int = 1, blocks: int = NI_BLOCK_COPIES) -> ReplayReport:
    cfg = {"mode": delta_mode, "n": n}
    if variant == "ni":
        cfg["blocks"] = blocks
    return _report(f"thm5-{variant}", lambda: replay_family(data, variant, n, delta_mode, blocks), cfg)


def derive_sequence(theorem: str = "thm1", n: int = 1) -> list[tuple[Profile, MarginMatrix]]:
    """Stage profiles with the expected matrices (scaled by n) attached as expectations."""
    fam = Q_FAMILY if theorem.startswith("thm5") else P_FAMILY
    variant = "ni" if theorem in ("thm3", "thm4", "thm5-ni") else "pi"
    r = _Replay(fam, variant, n, "linear", NI_BLOCK_COPIES)
    stages = r.build()
    if stages is None:
        failed = r.out[-1]
        raise InsufficientBallots(failed.label, failed.detail["need"], failed.detail["have"])
    return [(p, fam.expected(i) * n) for i, p in enumerate(stages, start=1)]


def verify_debord_route(data: Family = P_FAMILY, copies: int = 7, delta_mode: str = "weak") -> ReplayReport:
    """Replay the positive-involvement sequence from a constructed first stage.

    The first stage is the McGarvey-Debord realization of the first expected
    graph padded with ``copies`` of every linear order, so that each removal in
    the sequence is available without using the shipped P1 or Q1 profile at all.
    """
    base = pad_with_blocks(mcgarvey_debord_realize(data.expected(1)), copies)

    def run():
        r = _Replay(data, "pi", 1, delta_mode, 0, base=base)
        out = r.run()
        # facts about the shipped first-stage ballots do not carry over
        return [a for a in out if a.kind != "clone-set" and not a.label.startswith("Q1 without")]

    return _report(f"debord-route-{data.name}", run, {"mode": delta_mode, "copies": copies})


THEOREMS = ("thm1", "thm2", "thm3", "thm4", "thm5-pi", "thm5-ni")


def run_theorem(theorem: str, mode: str = "weak", n: int = 1, data: Family | None = None) -> ReplayReport:
    if theorem == "thm1":
        return verify_theorem1(mode, data or P_FAMILY)
    if theorem == "thm2":
        return verify_theorem2(n, mode, data or P_FAMILY)
    if theorem == "thm3":
        return verify_theorem3(mode, data or P_FAMILY)
    if theorem == "thm4":
        return verify_theorem4(n, mode, data or P_FAMILY)
    if theorem in ("thm5-pi", "thm5-ni"):
        return verify_theorem5(theorem[-2:], mode, data or Q_FAMILY, n)
    raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")


__all__ = [
    "FAMILIES",
    "ReplayReport",
    "StepAssertion",
    "derive_sequence",
    "replay_family",
    "run_theorem",
    "verify_theorem1",
    "verify_theorem2",
    "verify_theorem3",
    "verify_theorem4",
    "verify_debord_route",
    "verify_theorem5",
]
