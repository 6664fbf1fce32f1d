import math

import pytest
from helpers import R, profiles, random_profile
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import ordered_set_partitions

from marginkit.margins import margin, margin_matrix
from marginkit.profiles import (
    InsufficientBallots,
    Profile,
    ProfileError,
    Ranking,
    add_ballots,
    add_profiles,
    block_of_all_linear_orders,
    enumerate_linear_orders,
    enumerate_weak_orders,
    fubini,
    remove_ballots,
    remove_candidate,
    reverse_ranking,
    scale_profile,
)
from marginkit.replay import P_FAMILY, base_profile


def test_ranking_parse_forms_agree():
    assert R("dac") == R("d>a>c") == R("d|a|c") == Ranking.linear("dac")
    assert R("a,b>c") == R("a~b>c") == R("b,a | c")
    assert R("a,b>c").tiers == (("a", "b"), ("c",))


@pytest.mark.parametrize("bad", [(("a",), ("a",)), (("a",), ())])
def test_ranking_rejects_overlap_and_empty_tier(bad):
    with pytest.raises(ProfileError):
        Ranking(bad)


def test_profile_invariants():
    with pytest.raises(ProfileError):
        Profile(("a", "b"), ())
    with pytest.raises(ProfileError):
        Profile(("a", "b"), ((R("abc"), 1),))
    with pytest.raises(ProfileError):
        Profile(("a", "b"), ((R("ab"), 0),))
    p = Profile(("a", "b"), ((R("ab"), 2), (R("a>b"), 3)))
    assert p.ballots == ((R("ab"), 5),)


def test_add_profiles_p1_plus_26_gives_m2():
    q = add_profiles(base_profile("P1"), Profile.single("adbec", 26))
    assert q.num_voters == 245
    assert margin_matrix(q) == P_FAMILY.expected(2)


def test_add_count_zero_delta_is_identity():
    p = base_profile("P1")
    assert add_ballots(p, "adbec", 0) == p
    assert Profile.from_counts(p.candidates, [(0, "adbec"), *[(k, r) for r, k in p.ballots]]) == p


def test_opposed_single_voters_tie():
    p = Profile.single("ab") + Profile.single("ba")
    assert margin(p, "a", "b") == 0


def test_remove_ballots_examples():
    p1 = base_profile("P1")
    p2 = add_ballots(p1, "adbec", 26)
    assert margin_matrix(remove_ballots(p2, "daceb", 7)) == P_FAMILY.expected(3)
    assert remove_ballots(p1, "dbace", 18).count("dbace") == 0
    with pytest.raises(InsufficientBallots) as e:
        remove_ballots(p1, "daceb", 70)
    assert (e.value.wanted, e.value.available) == (70, 69)


def test_scale_examples():
    p1 = base_profile("P1")
    assert margin(scale_profile(p1, 2), "a", "c") == 166
    assert scale_profile(p1, 1) == p1
    assert margin(scale_profile(Profile.single("ab"), 3), "a", "b") == 3


def test_remove_candidate_examples():
    q = remove_candidate(Profile.from_counts("abc", [(1, "a,b>c")]), "b")
    assert q.ballots == ((R("ac"), 1),)
    merged = remove_candidate(Profile.from_counts("abc", [(3, "abc"), (4, "bac")]), "b")
    assert merged.ballots == ((R("ac"), 7),)
    with pytest.raises(ProfileError):
        remove_candidate(Profile.single("a"), "a")
    with pytest.raises(ProfileError):
        remove_candidate(Profile.single("ab"), "z")


def test_reverse_examples():
    assert reverse_ranking(R("adbec")) == R("cebda")
    assert reverse_ranking(R("daceb")) == R("becad")
    tied = Ranking((("a", "b", "c"),))
    assert reverse_ranking(tied) == tied


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_linear_order_enumeration(k):
    xs = "abcde"[:k]
    out = enumerate_linear_orders(xs)
    assert len(out) == len(set(out)) == math.factorial(k)
    assert out == sorted(out)


@pytest.mark.parametrize("k,expected", [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541)])
def test_weak_order_counts_match_bruteforce(k, expected):
    xs = "abcde"[:k]
    ours = enumerate_weak_orders(xs)
    brute = ordered_set_partitions(xs)
    assert len(ours) == len(brute) == expected == fubini(k)
    assert {r.tiers for r in ours} == brute
    assert all(r.candidates == frozenset(xs) for r in ours)


def test_block_examples():
    b = block_of_all_linear_orders("abcde", 147)
    assert b.num_voters == 17640
    assert not margin_matrix(b).m.any()
    assert block_of_all_linear_orders("abc", 2).num_voters == 12
    p = base_profile("P1")
    assert margin_matrix(p + block_of_all_linear_orders(p.candidates, 1)) == margin_matrix(p)


@settings(max_examples=200, deadline=None)
@given(profiles(), st.data())
def test_margin_additivity(p, data):
    q = data.draw(profiles(min_cands=len(p.candidates), max_cands=len(p.candidates)))
    assert margin_matrix(p + q) == margin_matrix(p) + margin_matrix(q)


@settings(max_examples=200, deadline=None)
@given(profiles(), st.integers(1, 5), st.data())
def test_reversal_matches_removal(p, k, data):
    r = data.draw(st.sampled_from([r for r, _ in p.ballots]))
    k = min(k, p.count(r))
    if k == p.num_voters:
        p = p + Profile.single(r.reversed()) + Profile.single(r)
    removed = remove_ballots(p, r, k)
    added = add_ballots(p, r.reversed(), k)
    assert margin_matrix(removed) == margin_matrix(added)


@settings(max_examples=200, deadline=None)
@given(profiles(), st.integers(1, 5))
def test_scaling_is_linear(p, n):
    assert margin_matrix(scale_profile(p, n)) == margin_matrix(p) * n


@settings(max_examples=200, deadline=None)
@given(profiles(), st.integers(1, 4), st.data())
def test_add_then_remove_round_trips(p, k, data):
    r = data.draw(st.sampled_from(enumerate_weak_orders(p.candidates)))
    assert remove_ballots(add_ballots(p, r, k), r, k) == p


def test_random_profiles_are_valid(rng):
    for _ in range(200):
        p = random_profile(rng, weak=True)
        assert p.num_voters >= 1
        assert all(k > 0 and r.candidates == frozenset(p.candidates) for r, k in p.ballots)
