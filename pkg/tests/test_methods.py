import numpy as np
import pytest
from helpers import as_ballots, profiles, random_profile
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import classic_borda, minimax as minimax_oracle, ranked_pairs_all_priorities, split_cycle_by_cycles

from marginkit.margins import MarginMatrix, condorcet_winner, defensible_set, margin_matrix, margin_separation_holds, uniquely_weighted
from marginkit.methods import (
    METHOD_IDS,
    TieExplosion,
    borda,
    get_method,
    leximax,
    minimax,
    ranked_pairs,
    split_cycle,
    split_cycle_defeats,
)
from marginkit.profiles import Profile, Ranking, block_of_all_linear_orders
from marginkit.replay import base_profile

CYCLE_333 = MarginMatrix.from_edges("abc", {("a", "b"): 3, ("b", "c"): 3, ("c", "a"): 3})

# computed once by the independent all-priorities oracle; frozen as a regression value
P1_RANKED_PAIRS = frozenset("a")


def test_single_candidate_everywhere():
    p = Profile.single("a")
    for name in METHOD_IDS:
        assert get_method(name)(p) == {"a"}


def test_symmetric_cycle_ties_everyone():
    assert minimax(CYCLE_333) == {"a", "b", "c"}
    assert split_cycle(CYCLE_333) == {"a", "b", "c"}
    assert leximax(block_of_all_linear_orders("abcd", 1)) == set("abcd")


def test_borda_condorcet_counterexample():
    p = Profile.from_counts("abc", [(3, "abc"), (2, "bca"), (2, "cba")])
    b = as_ballots(p)
    assert borda(p) == classic_borda(b, "abc") == {"b"}
    assert condorcet_winner(p) == "b"  # b beats a 4-3 and c 5-2, so no violation here
    witness = Profile.from_counts("abc", [(3, "abc"), (2, "bca")])
    assert condorcet_winner(witness) == "a" and borda(witness) == {"b"}


def test_ranked_pairs_p1_regression():
    p1 = base_profile("P1")
    assert ranked_pairs(p1) == ranked_pairs_all_priorities(as_ballots(p1), p1.candidates) == P1_RANKED_PAIRS


def test_ranked_pairs_cap():
    ties = MarginMatrix.from_edges("abcde", {(x, y): 2 for i, x in enumerate("abcde") for y in "abcde"[i + 1 :]})
    assert ranked_pairs(ties) == {"a"}
    cyc = np.zeros((5, 5), dtype=int)
    for i in range(5):
        for j in range(i + 1, 5):
            w = 2 if (j - i) % 2 else -2
            cyc[i, j], cyc[j, i] = w, -w
    with pytest.raises(TieExplosion):
        ranked_pairs(MarginMatrix(tuple("abcde"), cyc), cap=5)


def test_unknown_method():
    with pytest.raises(ValueError):
        get_method("plurality")


def test_methods_against_oracles(rng):
    for _ in range(1_500):
        p = random_profile(rng, max_cands=4, max_voters=9)
        b = as_ballots(p)
        assert borda(p) == classic_borda(b, p.candidates)
        assert minimax(p) == minimax_oracle(b, p.candidates)
        assert split_cycle(p) == split_cycle_by_cycles(b, p.candidates)
        assert ranked_pairs(p) == ranked_pairs_all_priorities(b, p.candidates)


def test_weak_profiles_against_oracles(rng):
    for _ in range(500):
        p = random_profile(rng, max_cands=4, max_voters=9, weak=True)
        b = as_ballots(p)
        assert minimax(p) == minimax_oracle(b, p.candidates)
        assert split_cycle(p) == split_cycle_by_cycles(b, p.candidates)
        assert ranked_pairs(p) == ranked_pairs_all_priorities(b, p.candidates)


def test_structural_sweep(rng):
    for _ in range(10_000):
        p = random_profile(rng, weak=bool(rng.integers(2)))
        mm = margin_matrix(p)
        cands = set(p.candidates)
        mx, lx, sc = minimax(mm), leximax(mm), split_cycle(mm)
        for w in (borda(mm), mx, lx, sc):
            assert w and w <= cands
        assert lx <= mx <= defensible_set(mm)
        d = split_cycle_defeats(mm)
        # a defeat relation is acyclic iff its transitive closure has an empty diagonal
        reach = d.astype(bool)
        for k in range(len(cands)):
            reach = reach | (reach[:, [k]] & reach[[k], :])
        assert not np.diag(reach).any()
        cw = condorcet_winner(mm)
        if cw is not None:
            assert mx == lx == sc == {cw}
        if uniquely_weighted(mm):
            assert len(ranked_pairs(mm)) == 1
        if margin_separation_holds(mm):
            assert sc <= defensible_set(mm)


def test_ranked_pairs_condorcet_sweep(rng):
    seen = 0
    while seen < 5_000:
        p = random_profile(rng, max_cands=5, max_voters=15)
        cw = condorcet_winner(p)
        if cw is None:
            continue
        seen += 1
        assert ranked_pairs(p) == {cw}


@settings(max_examples=200, deadline=None)
@given(profiles(min_cands=3), st.randoms(use_true_random=False))
def test_neutrality_under_relabeling(p, rnd):
    perm = list(p.candidates)
    rnd.shuffle(perm)
    rename = dict(zip(p.candidates, perm))
    q = Profile(p.candidates, tuple((Ranking(tuple(tuple(rename[c] for c in t) for t in r.tiers)), k) for r, k in p.ballots))
    for name in METHOD_IDS:
        f = get_method(name)
        assert {rename[c] for c in f(p)} == f(q)
