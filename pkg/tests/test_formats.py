import json

import pytest
from helpers import profiles
from hypothesis import given, settings

from marginkit.axioms import check_condorcet_winner
from marginkit.formats import (
    FormatError,
    edge_list_text,
    parse_edge_list,
    parse_profile_json,
    parse_profile_text,
    profile_to_json,
    profile_to_text,
    read_witness,
    witness_to_text,
)
from marginkit.margins import margin_matrix
from marginkit.profiles import Profile


@settings(max_examples=200, deadline=None)
@given(profiles())
def test_text_and_json_round_trip(p):
    assert parse_profile_text(profile_to_text(p)) == p
    assert parse_profile_json(json.dumps(profile_to_json(p))) == p


@settings(max_examples=100, deadline=None)
@given(profiles(min_cands=2))
def test_edge_list_round_trip(p):
    m = margin_matrix(p)
    text = f"candidates: {','.join(p.candidates)}\n" + edge_list_text(m)
    assert parse_edge_list(text) == m


@pytest.mark.parametrize(
    "text,line",
    [
        ("", None),
        ("3: a | b\n", 1),
        ("candidates: a,b\n3 a | b\n", 2),
        ("candidates: a,b\n\n# note\nx: a | b\n", 4),
        ("candidates: a,b\n2: a | a\n", 2),
        ("candidates: a,b\n2: a | c\n", 2),
        ("candidates: a,b\n-1: a | b\n", 2),
        ("candidates: a,a\n1: a\n", 1),
    ],
)
def test_text_parse_errors_name_the_line(text, line):
    with pytest.raises(FormatError) as e:
        parse_profile_text(text, "in.txt")
    assert e.value.line == line
    assert str(e.value).startswith("in.txt")


def test_only_zero_counts_is_rejected():
    with pytest.raises(FormatError):
        parse_profile_text("candidates: a,b\n0: a | b\n")


def test_json_errors():
    with pytest.raises(FormatError):
        parse_profile_json("{not json")
    with pytest.raises(FormatError):
        parse_profile_json('{"candidates": ["a"]}')
    with pytest.raises(FormatError):
        parse_profile_json('{"candidates": ["a","b"], "ballots": [{"count": 1, "tiers": [["a"]]}]}')


def test_edge_list_errors():
    for bad in ("a b\n", "a a 3\n", "a b x\n", "a b 1\nb a 1\n", "# nothing\n"):
        with pytest.raises(FormatError):
            parse_edge_list(bad)


def test_weak_tiers_in_text():
    p = parse_profile_text("candidates: a,b,c\n3: a,b | c\n1: c | a | b\n")
    assert p.num_voters == 4 and not p.is_linear


def test_witness_file_round_trip(tmp_path):
    p = Profile.from_counts("abc", [(2, "abc"), (1, "bca")])
    w = check_condorcet_winner("borda", p).witness
    path = tmp_path / "w.txt"
    path.write_text(witness_to_text(w))
    base, delta, meta = read_witness(path)
    assert base == p and delta == [] and meta["axiom"] == "condorcet-winner"
