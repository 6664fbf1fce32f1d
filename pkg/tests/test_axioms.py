import itertools

import pytest
from helpers import as_ballots, random_profile
from oracles import is_clone_set as clone_oracle

from marginkit import axioms as ax
from marginkit.margins import MarginMatrix
from marginkit.methods import METHOD_IDS
from marginkit.profiles import Profile, ProfileError, enumerate_linear_orders
from marginkit.replay import base_profile
from marginkit.search import SearchBudget, hunt_violations
from marginkit.synth import mcgarvey_debord_realize

CYCLE_333 = mcgarvey_debord_realize(MarginMatrix.from_edges("abc", {("a", "b"): 3, ("b", "c"): 3, ("c", "a"): 3}))
CYCLE_555 = mcgarvey_debord_realize(MarginMatrix.from_edges("abc", {("a", "b"): 5, ("b", "c"): 5, ("c", "a"): 5}))


def test_condorcet_checks():
    cw_profile = Profile.from_counts("abc", [(3, "abc"), (2, "bca")])
    assert ax.check_condorcet_winner("minimax", cw_profile)
    v = ax.check_condorcet_winner("borda", cw_profile)
    assert not v and ax.replay_witness(v.witness).ok is False
    assert ax.check_condorcet_winner("borda", CYCLE_333).vacuous


def test_involvement_vacuous_and_malformed():
    p = Profile.from_counts("abc", [(3, "abc"), (2, "bca")])
    assert ax.check_positive_involvement_instance("minimax", p, "cab").vacuous
    assert ax.check_negative_involvement_instance("minimax", p, "bca").vacuous
    with pytest.raises(ProfileError):
        ax.check_positive_involvement_instance("minimax", p, "a,b>c")
    with pytest.raises(ProfileError):
        ax.check_negative_involvement_instance("minimax", p, "a>b,c")
    with pytest.raises(ProfileError):
        ax.check_bullet_vote_positive_involvement("minimax", p, "abc")


def test_bullet_ballot_shape():
    b = ax.bullet_ballot("abcd", "c")
    assert b.tiers == (("c",), ("a", "b", "d"))


def test_bullet_follows_from_positive_involvement(rng):
    for _ in range(300):
        p = random_profile(rng, min_cands=3, max_cands=4, max_voters=8)
        for f in METHOD_IDS:
            for x in p.candidates:
                b = ax.bullet_ballot(p.candidates, x)
                if ax.check_positive_involvement_instance(f, p, b):
                    assert ax.check_bullet_vote_positive_involvement(f, p, b)


def test_resolvability_on_symmetric_cycle():
    # one added ballot a>b>c leaves a as the unique Split Cycle winner, and
    # rotations handle b and c, so this cycle is not a violation
    assert ax.check_resolvability("split-cycle", CYCLE_333)
    assert ax.check_resolvability("split-cycle", CYCLE_333, mode="weak")
    two = ax.check_n_voter_resolvability("split-cycle", CYCLE_555, n=2)
    assert two.ok
    assert ax.check_resolvability("minimax", Profile.single("abc")).vacuous


def test_n_resolvability_bound_and_reduction(rng):
    with pytest.raises(ValueError):
        ax.check_n_voter_resolvability("minimax", CYCLE_333, n=4)
    for _ in range(100):
        p = random_profile(rng, min_cands=3, max_cands=3, max_voters=6)
        for f in ("minimax", "split-cycle", "leximax"):
            one = ax.check_resolvability(f, p)
            assert ax.check_n_voter_resolvability(f, p, 1).ok == one.ok
            if ax.check_n_voter_resolvability(f, p, 2):
                assert ax.check_n_voter_resolvability(f, p, 3)


def test_quasi_resoluteness():
    assert ax.check_quasi_resoluteness("minimax", base_profile("P1")).vacuous
    single = Profile.single("a")
    assert ax.check_quasi_resoluteness("minimax", single)
    assert ax.check_strict_positive_involvement("minimax", Profile.single("ab"), "ab")


def test_clone_examples():
    q1, p1 = base_profile("Q1"), base_profile("P1")
    assert ax.is_clone_set(q1, "abce")
    assert not ax.is_clone_set(p1, "ab")
    tied = Profile.from_counts("abc", [(2, "a,b>c"), (1, "c>a,b")])
    assert ax.is_clone_set(tied, "ab")
    assert not ax.is_clone_set(tied, "abc")  # must be proper
    assert frozenset("abce") in ax.detect_clone_sets(q1)


def test_clone_detection_matches_bruteforce(rng):
    for _ in range(300):
        p = random_profile(rng, min_cands=3, max_cands=5, max_voters=6, weak=bool(rng.integers(2)))
        b = as_ballots(p)
        brute = {
            frozenset(C)
            for k in range(2, len(p.candidates))
            for C in itertools.combinations(p.candidates, k)
            if clone_oracle(b, p.candidates, C)
        }
        assert set(ax.all_clone_sets(p)) == brute
        maximal = {C for C in brute if not any(C < D for D in brute)}
        assert set(ax.detect_clone_sets(p)) == maximal


def test_independence_of_clones_on_q1():
    q1 = base_profile("Q1")
    v = ax.check_independence_of_clones("split-cycle", q1, "b", "abce")
    assert v.ok  # recorded result: Split Cycle passes this instance
    with pytest.raises(ProfileError):
        ax.check_independence_of_clones("split-cycle", q1, "d", "abce")


def test_block_preservation_sweep(rng):
    for _ in range(1_000):
        p = random_profile(rng, max_cands=4, max_voters=10)
        for f in METHOD_IDS:
            assert ax.check_block_preservation(f, p)
    assert ax.check_block_preservation("borda", Profile.single("a"))


def test_positive_negative_involvement_malformed():
    with pytest.raises(ProfileError):
        ax.check_positive_negative_involvement("minimax", Profile.single("abc"), "a>b,c")


def test_vacuous_passes_never_report_violations(rng):
    doms = {}
    for _ in range(300):
        p = random_profile(rng, min_cands=3, max_cands=4, max_voters=8)
        dom = doms.setdefault(p.candidates, enumerate_linear_orders(p.candidates))
        for f in ("minimax", "split-cycle", "borda"):
            before = ax.get_method(f)(p)
            for b in dom[::5]:
                v = ax.check_positive_involvement_instance(f, p, b)
                if b.top() not in before:
                    assert v.vacuous
                v = ax.check_negative_involvement_instance(f, p, b)
                if b.bottom() in before:
                    assert v.vacuous


def test_witness_round_trip_for_every_search_hit():
    cases = [
        ("borda", "condorcet-winner", SearchBudget(max_candidates=3, max_voters=6)),
        ("minimax", "condorcet-loser", SearchBudget(min_candidates=3, max_candidates=4, mode="mcgarvey", max_weight=3)),
        ("split-cycle", "resolvability", SearchBudget(min_candidates=4, max_candidates=4, mode="mcgarvey", max_weight=2)),
        ("borda", "independence-of-clones", SearchBudget(max_candidates=3, max_voters=5)),
    ]
    for f, a, budget in cases:
        res = hunt_violations(f, a, budget)
        assert res.found, (f, a)
        assert not ax.replay_witness(res.witness)
