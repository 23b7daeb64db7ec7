from fractions import Fraction

import pytest

from conftest import oracle_search, random_instance
from pbvoting.core import (ApprovalProfile, PBInstance, Project, pav_score,
                           representation, social_welfare)
from pbvoting.exact import (SearchBudget, SearchBudgetExceeded,
                            TieBreakPolicy, optimum_value, solve_av,
                            solve_cc, solve_pav)


def test_tiebreak_policy_validation():
    with pytest.raises(ValueError):
        TieBreakPolicy("nope")
    with pytest.raises(ValueError):
        TieBreakPolicy("random")  # missing seed
    assert TieBreakPolicy.random_seeded(7).seed == 7


def test_av_on_tiny(tiny_pair):
    inst, prof = tiny_pair
    worst_rp = solve_av(inst, prof, TieBreakPolicy.worst_rp())
    assert worst_rp == frozenset({"p1", "p2"})
    assert social_welfare(prof, worst_rp) == 3
    assert representation(prof, worst_rp) == 2
    lex = solve_av(inst, prof, TieBreakPolicy.lex())
    assert social_welfare(prof, lex) == 3


def test_cc_and_pav_on_tiny(tiny_pair):
    inst, prof = tiny_pair
    assert solve_cc(inst, prof) == frozenset({"p1", "p3"})
    pav = solve_pav(inst, prof)
    assert pav == frozenset({"p1", "p3"})
    assert pav_score(prof, pav) == 3


def test_av_on_city(city_pair):
    inst, prof = city_pair
    bundle = solve_av(inst, prof, TieBreakPolicy.worst_rp())
    assert bundle == frozenset(
        {"A-d0", "A-d1"} | {f"A-g{i}" for i in range(6)})
    assert social_welfare(prof, bundle) == 800
    assert representation(prof, bundle) == 100


def test_cc_on_city(city_pair):
    # coverage optimum is 200; the least-welfare budget-exhausting optimum
    # funds one A diamond, three B diamonds and the C emerald
    inst, prof = city_pair
    bundle = solve_cc(inst, prof, TieBreakPolicy.worst_sw())
    assert representation(prof, bundle) == 200
    assert social_welfare(prof, bundle) == 380


def test_pav_on_city(city_pair):
    inst, prof = city_pair
    bundle = solve_pav(inst, prof, TieBreakPolicy.cheapest())
    assert bundle == frozenset(
        {f"A-g{i}" for i in range(5)} | {f"B-e{i}" for i in range(3)})
    assert social_welfare(prof, bundle) == 770
    assert representation(prof, bundle) == 190


def test_random_tiebreak_is_deterministic(city_pair):
    inst, prof = city_pair
    a = solve_pav(inst, prof, TieBreakPolicy.random_seeded(123))
    b = solve_pav(inst, prof, TieBreakPolicy.random_seeded(123))
    assert a == b
    scores = {pav_score(prof, x) for x in (a, b)}
    assert len(scores) == 1


def test_search_budget_exceeded(city_pair):
    inst, prof = city_pair
    with pytest.raises(SearchBudgetExceeded):
        solve_pav(inst, prof, search_budget=SearchBudget(max_nodes=3))


def test_objectives_match_oracle_small_sample():
    # the full 500-instance comparison lives in the acceptance suite
    for seed in range(40):
        inst, prof = random_instance(seed, max_projects=9)
        for objective, solve in (("sw", solve_av), ("rp", solve_cc),
                                 ("pav", solve_pav)):
            best, optima = oracle_search(inst, prof, objective)
            assert optimum_value(objective, inst, prof) == best, (seed, objective)
            picked = solve(inst, prof, TieBreakPolicy.lex())
            assert picked == min(optima, key=lambda b: tuple(sorted(b))), \
                (seed, objective)


def test_worst_tie_policies_match_oracle():
    for seed in range(40):
        inst, prof = random_instance(seed, max_projects=8)
        _, optima = oracle_search(inst, prof, "rp")
        worst = solve_cc(inst, prof, TieBreakPolicy.worst_sw())
        assert social_welfare(prof, worst) == \
            min(social_welfare(prof, b) for b in optima), seed
        _, optima = oracle_search(inst, prof, "sw")
        worst = solve_av(inst, prof, TieBreakPolicy.worst_rp())
        assert representation(prof, worst) == \
            min(representation(prof, b) for b in optima), seed


def test_cheapest_tie_policy_matches_oracle():
    for seed in range(40):
        inst, prof = random_instance(seed, max_projects=8)
        _, optima = oracle_search(inst, prof, "pav")
        picked = solve_pav(inst, prof, TieBreakPolicy.cheapest())
        assert inst.cost_of(picked) == \
            min(inst.cost_of(b) for b in optima), seed


def test_outcome_is_budget_exhausting():
    # no unfunded project fits in the residual budget
    for seed in range(60):
        inst, prof = random_instance(seed, max_projects=10)
        bundle = solve_av(inst, prof)
        residual = inst.budget - inst.cost_of(bundle)
        assert all(p.cost > residual
                   for p in inst.projects if p.id not in bundle), seed


def test_interchangeable_projects_keep_canonical_ids():
    # five identical projects, budget for three: the lex pick funds p0..p2
    projects = tuple(Project(f"p{j}", 2) for j in range(5))
    inst = PBInstance(projects, 6)
    prof = ApprovalProfile((frozenset(p.id for p in projects),) * 3)
    assert solve_av(inst, prof) == frozenset({"p0", "p1", "p2"})
    assert optimum_value("sw", inst, prof) == 9
    assert optimum_value("pav", inst, prof) == 3 * Fraction(11, 6)
