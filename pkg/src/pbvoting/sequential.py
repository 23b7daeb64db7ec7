"""Polynomial-time sequential rules.

Contains the greedy harmonic-score heuristic (`seq_pav`), the equal-shares
rule (`rule_x`) built on a per-project payment-threshold computation
(`q_value`), and two budget-exhausting completions: a vanishing-uniform-gain
phase (`rule_x_eps`) and an exact harmonic-score run on the residual budget
(`rule_x_pav`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import ApprovalProfile, PBInstance, pav_score
from .exact import SearchBudget, TieBreakPolicy, solve_pav


def q_value(cost: Fraction, budgets: Sequence[Fraction],
            utilities: Sequence[Fraction | int]) -> Optional[Fraction]:
    """Minimal uniform payment rate q at which a project is affordable.

    A project is affordable at rate q when sum_i min(b_i, u_i * q) covers its
    cost.  Returns None when even the full remaining money of the interested
    voters cannot cover the cost.  Computed by iteratively capping voters
    whose budget is below their share and re-splitting the leftover.
    """
    if cost <= 0:
        raise ValueError("cost must be positive")
    if len(budgets) != len(utilities):
        raise ValueError("budgets and utilities must align")
    if sum(b for b, u in zip(budgets, utilities) if u > 0) < cost:
        return None
    current_utility = sum(Fraction(u) for u in utilities)
    cost_leftover = Fraction(cost)
    removed = [False] * len(budgets)
    while True:
        current_q = cost_leftover / current_utility
        voter_removed = False
        for i, (b, u) in enumerate(zip(budgets, utilities)):
            if removed[i] or u == 0:
                continue
            if current_q * u > b:
                current_utility -= u
                cost_leftover -= b
                removed[i] = True
                voter_removed = True
        if not voter_removed:
            return cost_leftover / current_utility


@dataclass
class EqualSharesTrace:
    """Audit record of one equal-shares run."""

    funded: list[str] = field(default_factory=list)
    charges: dict[str, list[Fraction]] = field(default_factory=dict)
    final_budgets: list[Fraction] = field(default_factory=list)


def _equal_shares_loop(instance: PBInstance, budgets: list[Fraction],
                       utilities: dict[str, list[Fraction | int]],
                       already_funded: set[str],
                       trace: Optional[EqualSharesTrace]) -> list[str]:
    """Core loop: repeatedly fund the project with minimal finite q.

    Ties on q go to the cheaper project, then to the lexicographically
    smaller id.  `budgets` is mutated in place.
    """
    funded: list[str] = []
    remaining = {p.id for p in instance.projects} - already_funded
    while True:
        best = None
        for pid in sorted(remaining, key=lambda p: (instance.cost(p), p)):
            q = q_value(instance.cost(pid), budgets, utilities[pid])
            if q is not None and (best is None or q < best[0]):
                best = (q, pid)
        if best is None:
            break
        q, pid = best
        charges = [min(b, u * q) for b, u in zip(budgets, utilities[pid])]
        for i, c in enumerate(charges):
            budgets[i] -= c
        funded.append(pid)
        remaining.discard(pid)
        if trace is not None:
            trace.funded.append(pid)
            trace.charges[pid] = charges
    if trace is not None:
        trace.final_budgets = list(budgets)
    return funded


def rule_x(instance: PBInstance, profile: ApprovalProfile,
           trace: Optional[EqualSharesTrace] = None) -> frozenset:
    """Equal-shares rule for approval utilities.

    Every voter starts with an equal share of the budget; projects are funded
    in order of their minimal payment rate q, each approver paying
    min(remaining budget, q) until no project remains affordable.
    """
    profile.validate(instance)
    n = profile.n_voters
    if n == 0:
        raise ValueError("equal shares needs at least one voter")
    budgets = [instance.budget / n] * n
    utilities = {
        p.id: [1 if p.id in ballot else 0 for ballot in profile.ballots]
        for p in instance.projects
    }
    funded = _equal_shares_loop(instance, budgets, utilities, set(), trace)
    return frozenset(funded)


def rule_x_eps(instance: PBInstance, profile: ApprovalProfile,
               mode: str = "limit",
               trace: Optional[EqualSharesTrace] = None) -> frozenset:
    """Equal shares followed by budget exhaustion via vanishing uniform gains.

    mode="limit" runs the exact epsilon->0 limit: after the approval phase,
    leftover money funds further projects at a uniform per-voter threshold r,
    picking the project with minimal r and charging min(b_i, r) to everyone.
    mode="fixed:<rational>" instead runs a single generalized pass where
    non-approvers have the given small utility; it exists to cross-check the
    limit semantics and should agree for sufficiently small values.
    """
    profile.validate(instance)
    n = profile.n_voters
    if n == 0:
        raise ValueError("equal shares needs at least one voter")
    if mode == "limit":
        t = trace if trace is not None else EqualSharesTrace()
        budgets = [instance.budget / n] * n
        utilities = {
            p.id: [1 if p.id in ballot else 0 for ballot in profile.ballots]
            for p in instance.projects
        }
        funded = _equal_shares_loop(instance, budgets, utilities, set(), t)
        ones = {p.id: [1] * n for p in instance.projects}
        extra = _equal_shares_loop(instance, budgets, ones, set(funded), t)
        if trace is not None:
            trace.final_budgets = list(budgets)
        return frozenset(funded) | frozenset(extra)
    if mode.startswith("fixed:"):
        eps = Fraction(mode.split(":", 1)[1])
        if not 0 < eps < 1:
            raise ValueError("fixed epsilon must lie in (0, 1)")
        budgets = [instance.budget / n] * n
        utilities = {
            p.id: [1 if p.id in ballot else eps for ballot in profile.ballots]
            for p in instance.projects
        }
        return frozenset(
            _equal_shares_loop(instance, budgets, utilities, set(), trace))
    raise ValueError(f"unknown mode {mode!r}")


def rule_x_pav(instance: PBInstance, profile: ApprovalProfile,
               tiebreak: TieBreakPolicy = TieBreakPolicy.lex(),
               search_budget: SearchBudget = SearchBudget()) -> frozenset:
    """Equal shares, then the exact harmonic-score rule on what's left.

    The second stage optimizes over the unfunded projects with the residual
    budget; the result is the union of both stages.
    """
    first = rule_x(instance, profile)
    residual = instance.budget - instance.cost_of(first)
    rest = [p for p in instance.projects if p.id not in first]
    if not rest or residual < min(p.cost for p in rest):
        return first
    sub = PBInstance(projects=tuple(rest), budget=residual)
    sub_profile = ApprovalProfile(tuple(
        ballot & frozenset(p.id for p in rest) for ballot in profile.ballots))
    extra = solve_pav(sub, sub_profile, tiebreak, search_budget)
    return first | extra


def seq_pav(instance: PBInstance, profile: ApprovalProfile,
            tiebreak: TieBreakPolicy = TieBreakPolicy.cheapest()) -> frozenset:
    """Greedy harmonic-score rule.

    Repeatedly adds the affordable project with the largest harmonic-score
    increment; stops when nothing fits.  Increment ties are resolved by the
    given policy (default: cheaper cost, then lexicographic id).
    """
    profile.validate(instance)
    import random as _random
    rng = (_random.Random(tiebreak.seed)
           if tiebreak.variant == "random" else None)
    chosen: set[str] = set()
    counts = [len(ballot & chosen) for ballot in profile.ballots]
    spent = Fraction(0)
    while True:
        residual = instance.budget - spent
        best_gain = None
        candidates = []
        for p in instance.projects:
            if p.id in chosen or p.cost > residual:
                continue
            gain = sum(Fraction(1, counts[i] + 1)
                       for i, ballot in enumerate(profile.ballots)
                       if p.id in ballot)
            if best_gain is None or gain > best_gain:
                best_gain = gain
                candidates = [p]
            elif gain == best_gain:
                candidates.append(p)
        if best_gain is None:
            return frozenset(chosen)
        pick = _pick_step(candidates, tiebreak, rng)
        chosen.add(pick.id)
        spent += pick.cost
        for i, ballot in enumerate(profile.ballots):
            if pick.id in ballot:
                counts[i] += 1


def _pick_step(candidates, tiebreak: TieBreakPolicy, rng):
    if tiebreak.variant == "cheapest-first":
        return min(candidates, key=lambda p: (p.cost, p.id))
    if tiebreak.variant == "lex-by-id":
        return min(candidates, key=lambda p: p.id)
    if tiebreak.variant == "random":
        ordered = sorted(candidates, key=lambda p: p.id)
        return ordered[rng.randrange(len(ordered))]
    raise ValueError(
        f"tie-break {tiebreak.variant!r} is not defined for greedy selection")
