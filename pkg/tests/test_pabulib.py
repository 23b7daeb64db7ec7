from fractions import Fraction
from pathlib import Path

import pytest

from conftest import random_instance
from pbvoting.core import ApprovalProfile, PBInstance, Project
from pbvoting.datagen import generate
from pbvoting.exact import solve_av
from pbvoting.instances import city
from pbvoting.pabulib import (PabulibParseError, format_decimal, parse_pb,
                              write_pb)

DATA = Path(__file__).parent / "data"

MINIMAL = """META
budget;1000
num_projects;1
num_votes;1
PROJECTS
project_id;cost
p;100
VOTES
voter_id;vote
v1;p
"""


def test_minimal_fixture():
    inst, prof, pab = parse_pb(MINIMAL)
    assert inst.budget == 1000
    assert inst.cost("p") == 100
    assert prof.ballots == (frozenset({"p"}),)
    assert pab.meta_dict()["num_votes"] == "1"


def test_city_golden_file_byte_exact(city_pair):
    inst, prof = city_pair
    text = write_pb(inst, prof)
    assert text == (DATA / "city.pb").read_text(encoding="utf-8")


def test_city_roundtrips_through_pipeline(city_pair):
    inst, prof = city_pair
    inst2, prof2, _ = parse_pb(write_pb(inst, prof))
    assert inst2 == inst and prof2 == prof
    from pbvoting.core import social_welfare
    assert social_welfare(prof2, solve_av(inst2, prof2)) == 800


def test_unknown_project_in_vote_names_line():
    bad = MINIMAL.replace("v1;p", "v1;p,zz")
    with pytest.raises(PabulibParseError, match=r"line 10.*'zz'"):
        parse_pb(bad)


def test_missing_section():
    with pytest.raises(PabulibParseError, match="missing section VOTES"):
        parse_pb("META\nbudget;1\nnum_projects;0\nnum_votes;0\n"
                 "PROJECTS\nproject_id;cost\n")


def test_non_positive_cost_rejected():
    bad = MINIMAL.replace("p;100", "p;0")
    with pytest.raises(PabulibParseError, match="non-positive cost"):
        parse_pb(bad)


def test_malformed_budget():
    bad = MINIMAL.replace("budget;1000", "budget;12,5")
    with pytest.raises(PabulibParseError, match="malformed decimal"):
        parse_pb(bad)


def test_count_mismatches_rejected():
    with pytest.raises(PabulibParseError, match="num_votes"):
        parse_pb(MINIMAL.replace("num_votes;1", "num_votes;3"))
    with pytest.raises(PabulibParseError, match="num_projects"):
        parse_pb(MINIMAL.replace("num_projects;1", "num_projects;2"))


def test_non_approval_vote_type_rejected():
    bad = MINIMAL.replace("num_votes;1", "num_votes;1\nvote_type;ordinal")
    with pytest.raises(PabulibParseError, match="only approval"):
        parse_pb(bad)


def test_empty_vote_field_is_empty_ballot():
    text = MINIMAL.replace("v1;p", "v1;")
    _, prof, _ = parse_pb(text)
    assert prof.ballots == (frozenset(),)


def test_votes_deduplicate():
    text = MINIMAL.replace("v1;p", "v1;p,p")
    _, prof, _ = parse_pb(text)
    assert prof.ballots == (frozenset({"p"}),)


def test_empty_profile_roundtrip():
    inst = PBInstance((Project("p", 100),), 1000)
    prof = ApprovalProfile(())
    text = write_pb(inst, prof)
    assert "num_votes;0" in text
    inst2, prof2, _ = parse_pb(text)
    assert prof2.n_voters == 0 and inst2 == inst


def test_extra_meta_preserved_and_conflicts_rejected(city_pair):
    inst, prof = city_pair
    text = write_pb(inst, prof, {"description": "three districts"})
    _, _, pab = parse_pb(text)
    assert pab.meta_dict()["description"] == "three districts"
    with pytest.raises(ValueError, match="derived"):
        write_pb(inst, prof, {"budget": "999"})


def test_format_decimal():
    assert format_decimal(Fraction(1234567, 100)) == "12345.67"
    assert format_decimal(Fraction(5)) == "5"
    assert format_decimal(Fraction(1, 8)) == "0.125"
    assert format_decimal(Fraction(-3, 4)) == "-0.75"
    with pytest.raises(ValueError):
        format_decimal(Fraction(1, 3))


def test_high_precision_costs_kept_exact():
    text = MINIMAL.replace("p;100", "p;100.123456")
    inst, _, _ = parse_pb(text)
    assert inst.cost("p") == Fraction(100123456, 10 ** 6)


def test_roundtrip_on_generated_corpora():
    for seed in range(50):
        for kind in ("euclidean-desk", "partylist-desk"):
            inst, prof = generate(kind, seed)
            text = write_pb(inst, prof)
            inst2, prof2, _ = parse_pb(text)
            assert inst2 == inst and prof2 == prof, (kind, seed)
            assert write_pb(inst2, prof2) == text, (kind, seed)


def test_roundtrip_on_random_instances():
    for seed in range(50):
        inst, prof = random_instance(seed, max_projects=10)
        inst2, prof2, _ = parse_pb(write_pb(inst, prof))
        assert inst2 == inst and prof2 == prof, seed
