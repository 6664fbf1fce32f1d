import math

import pytest

from marginkit import shipped_file
from marginkit.formats import read_edge_list, read_profile
from marginkit.margins import defensible_set, margin_matrix
from marginkit.replay import (
    P_FAMILY,
    Q_FAMILY,
    derive_sequence,
    mutations,
    base_profile,
    replay_family,
    verify_debord_route,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_theorem5,
)
from marginkit.replay.data import Step
from marginkit.replay.quantify import DeltaSpace, distinct_sums, multiset_count


def test_base_profiles():
    assert base_profile("P1").num_voters == 219
    assert base_profile("Q1").num_voters == 209
    with pytest.raises(KeyError):
        base_profile("P2")


def test_derive_sequence_examples():
    p = derive_sequence("thm1")
    assert margin_matrix(p[1][0])["a", "d"] == 27
    assert margin_matrix(p[4][0])["e", "b"] == 42
    q = derive_sequence("thm5-pi")
    assert margin_matrix(q[3][0])["b", "a"] == 79
    assert all(margin_matrix(prof) == want for prof, want in p + q)


def test_augmented_first_stage_size():
    p = derive_sequence("thm3")[0][0]
    assert p.num_voters == 219 + 147 * 120


def test_shipped_files_match_built_in_data():
    assert read_profile(shipped_file("P1.txt")) == base_profile("P1")
    assert read_profile(shipped_file("Q1.txt")) == base_profile("Q1")
    for fam in (P_FAMILY, Q_FAMILY):
        for i in range(1, 6):
            assert read_edge_list(shipped_file(f"{fam.name}_M{i}.edges")) == fam.expected(i)


def test_clone_sequence_final_defensible_set():
    assert defensible_set(derive_sequence("thm5-pi")[4][0]) == {"d"}


def test_q1_ballot_count_for_dbaec():
    assert base_profile("Q1").count("dbaec") == 62


def test_reversed_steps_match_negative_involvement_deltas():
    rev = [s.reversed() for s in P_FAMILY.steps]
    assert rev[0] == Step(-1, ((26, "cebda"),), "a")
    assert rev[1] == Step(+1, ((7, "becad"),), "d")
    assert rev[2] == Step(-1, ((23, "caedb"),), "b")
    assert rev[3] == Step(+1, ((7, "ecabd"),), "d")


def test_delta_space_cardinalities():
    assert DeltaSpace(tuple("abcde"), "weak", 1).cardinality == 542
    assert DeltaSpace(tuple("abcde"), "linear", 2).cardinality == 1 + 120 + 7260
    assert multiset_count(120, 2) == 1 + 120 + math.comb(121, 2)


def test_distinct_sums_match_direct_enumeration():
    cands = tuple("abc")
    space = DeltaSpace(cands, "weak", 2)
    direct = {m.tobytes() for m in space.single_effects().astype("int64")}
    packed = {m.tobytes() for m in space.distinct_effects().astype("int64")}
    assert direct == packed
    assert distinct_sums(cands, "weak", 2)[0].tolist() == [0, 0, 0]


def test_n1_reports_equal_base_reports():
    for mode in ("linear", "weak"):
        assert verify_theorem2(1, mode).same_checks(verify_theorem1(mode))


def test_replays_are_deterministic():
    a, b = verify_theorem5("ni", "linear"), verify_theorem5("ni", "linear")
    assert a.to_dict() == b.to_dict()


def test_replay_scope_is_bounded():
    with pytest.raises(ValueError):
        verify_theorem2(4)
    with pytest.raises(ValueError):
        replay_family(P_FAMILY, "xx")


def test_failing_assertions_carry_counterexamples():
    name, fam = mutations(P_FAMILY)[0]
    report = verify_theorem1("linear", fam)
    assert not report.passed
    assert all(a.detail for a in report.failures if a.kind == "margin-equality")


def test_too_few_blocks_breaks_availability():
    report = verify_theorem3("linear", blocks=20)
    assert not report.passed
    assert any(a.kind == "availability" and not a.passed for a in report.assertions)


def test_debord_route_cross_check():
    for fam in (P_FAMILY, Q_FAMILY):
        assert verify_debord_route(fam, delta_mode="linear").passed


def test_mutation_catalogue_size():
    assert len(mutations(P_FAMILY)) >= 10 and len(mutations(Q_FAMILY)) >= 10
