"""Cohesive-group test and an exact, capped EJR violation search.

A group of voters that jointly approves a project set T and could pay for T
with its proportional share of the budget is entitled to representation: some
member must end up with at least |T| approved funded projects.  The checker
searches for a witness (S, T) violating that entitlement and returns a
certificate when it finds one.

Only maximal supporter sets need testing: growing S can only help the budget
condition, and the entitlement must hold for *all* members, so for a fixed T
the decisive group is the set of all under-represented supporters of T.  That
collapses the search to one candidate S per T.  Candidate sets T are subsets
of individual ballots (T must be jointly approved, so it is contained in any
supporter's ballot).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import ApprovalProfile, PBInstance, UnknownProjectError


@dataclass(frozen=True)
class CohesiveWitness:
    voters: frozenset[int]
    projects: frozenset[str]


@dataclass(frozen=True)
class EjrVerdict:
    status: str  # "satisfied" | "violated" | "unknown"
    cap: int
    witness: Optional[CohesiveWitness] = None

    @property
    def ok(self) -> bool:
        return self.status == "satisfied"


def is_cohesive(instance: PBInstance, profile: ApprovalProfile,
                voters: Iterable[int], projects: Iterable[str]) -> bool:
    """True iff the voters jointly approve the projects and their
    proportional budget share covers the projects' cost."""
    S = frozenset(voters)
    T = frozenset(projects)
    for i in S:
        if not 0 <= i < profile.n_voters:
            raise ValueError(f"voter index {i} out of range")
    for pid in T:
        instance.cost(pid)  # raises UnknownProjectError if absent
    if not all(T <= profile.ballots[i] for i in S):
        return False
    share = Fraction(instance.budget, profile.n_voters) * len(S)
    return share >= instance.cost_of(T)


def default_t_cap(instance: PBInstance) -> int:
    """Search depth covering every feasible witness size, capped at 10."""
    return min(int(instance.budget // instance.c_min), 10)


def max_t_cap(instance: PBInstance) -> int:
    """Largest possible |T| of any feasible witness."""
    return int(instance.budget // instance.c_min)


def find_ejr_violation(instance: PBInstance, profile: ApprovalProfile,
                       bundle: Iterable[str],
                       t_cap: Optional[int] = None) -> EjrVerdict:
    """Search all witness sets T with |T| <= t_cap for an EJR violation.

    Returns a verdict with a re-checkable witness on violation.  When no
    violation is found, the status is "satisfied" only if t_cap covers every
    feasible witness size; otherwise it is "unknown".
    """
    profile.validate(instance)
    funded = frozenset(bundle)
    for pid in funded:
        instance.cost(pid)
    if t_cap is None:
        t_cap = default_t_cap(instance)
    if t_cap < 0:
        raise ValueError("t_cap must be non-negative")

    n = profile.n_voters
    share_unit = Fraction(instance.budget, n)
    overlap = [len(ballot & funded) for ballot in profile.ballots]

    seen: set[frozenset[str]] = set()
    for i, ballot in enumerate(profile.ballots):
        # T must sit inside some member's ballot; a member is only relevant
        # while under-represented, i.e. overlap < |T|
        max_size = min(len(ballot), t_cap)
        for size in range(overlap[i] + 1, max_size + 1):
            for T in combinations(sorted(ballot), size):
                T = frozenset(T)
                if T in seen:
                    continue
                seen.add(T)
                cost_T = instance.cost_of(T)
                if cost_T > instance.budget:
                    continue
                supporters = frozenset(
                    j for j in range(n)
                    if overlap[j] < size and T <= profile.ballots[j])
                if not supporters:
                    continue
                if share_unit * len(supporters) >= cost_T:
                    return EjrVerdict("violated", t_cap,
                                      CohesiveWitness(supporters, T))
    status = "satisfied" if t_cap >= max_t_cap(instance) else "unknown"
    return EjrVerdict(status, t_cap)


class CappedSearchError(RuntimeError):
    """An aggregate was requested over verdicts that include unknowns."""


def ejr_percentage(verdicts: Sequence[EjrVerdict]) -> Fraction:
    """Fraction of verdicts with status satisfied; errors on unknowns."""
    if not verdicts:
        raise ValueError("no verdicts given")
    unknown = sum(1 for v in verdicts if v.status == "unknown")
    if unknown:
        raise CappedSearchError(
            f"{unknown} verdict(s) hit the search cap; raise t_cap")
    return Fraction(sum(1 for v in verdicts if v.status == "satisfied"),
                    len(verdicts))
