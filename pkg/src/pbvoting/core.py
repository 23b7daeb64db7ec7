"""Domain model for participatory budgeting.

A budgeting problem consists of a list of projects with positive costs, a
global budget, and one approval ballot per voter.  Everything downstream
(exact optimizers, sequential rules, proportionality checks) consumes the
types and scoring functions defined here.

All arithmetic is exact: costs and budgets are :class:`fractions.Fraction`,
scores are integers or fractions.  This matters because the worst-case
constructions and the ratio assertions in the test suite compare values for
exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

Bundle = frozenset  # a bundle is simply a frozenset of project ids

_RationalLike = int | Fraction | str


class UnknownProjectError(ValueError):
    """A bundle or ballot references a project id that does not exist."""


class DegenerateInstanceError(ValueError):
    """Raised when a ratio denominator is zero (no voter approves anything)."""


def as_fraction(x: _RationalLike) -> Fraction:
    """Convert ints, decimal strings and fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class Project:
    """A candidate project with a strictly positive cost."""

    id: str
    cost: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cost", as_fraction(self.cost))
        if self.cost <= 0:
            raise ValueError(f"project {self.id!r} has non-positive cost {self.cost}")


@dataclass(frozen=True)
class PBInstance:
    """Projects plus a total budget.

    The approval profile is kept separate so that one instance can be paired
    with many profiles.
    """

    projects: tuple[Project, ...]
    budget: Fraction

    def __post_init__(self):
        object.__setattr__(self, "projects", tuple(self.projects))
        object.__setattr__(self, "budget", as_fraction(self.budget))
        if self.budget <= 0:
            raise ValueError(f"budget must be positive, got {self.budget}")
        if not self.projects:
            raise ValueError("instance needs at least one project")
        ids = [p.id for p in self.projects]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate project ids")
        object.__setattr__(self, "_cost", {p.id: p.cost for p in self.projects})

    @property
    def project_ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.projects)

    def cost(self, project_id: str) -> Fraction:
        try:
            return self._cost[project_id]
        except KeyError:
            raise UnknownProjectError(f"unknown project id {project_id!r}") from None

    def cost_of(self, bundle: Iterable[str]) -> Fraction:
        return sum((self.cost(p) for p in bundle), Fraction(0))

    @property
    def c_min(self) -> Fraction:
        return min(p.cost for p in self.projects)

    @property
    def c_max(self) -> Fraction:
        return max(p.cost for p in self.projects)


@dataclass(frozen=True)
class ApprovalProfile:
    """One approval set per voter; the voter id is the ballot index.

    Empty ballots are legal and contribute zero to every score.  A profile
    with zero voters is also legal (it occurs in empty data files); rules
    that divide the budget among voters reject it explicitly.
    """

    ballots: tuple[frozenset[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "ballots", tuple(frozenset(b) for b in self.ballots))

    @property
    def n_voters(self) -> int:
        return len(self.ballots)

    def validate(self, instance: PBInstance) -> None:
        known = set(instance.project_ids)
        for i, ballot in enumerate(self.ballots):
            bad = ballot - known
            if bad:
                raise UnknownProjectError(
                    f"ballot {i} approves unknown project(s) {sorted(bad)}"
                )


def _check_bundle(instance: Optional[PBInstance], bundle: Iterable[str]):
    if instance is not None:
        known = set(instance.project_ids)
        bad = set(bundle) - known
        if bad:
            raise UnknownProjectError(f"unknown project id(s) {sorted(bad)}")


def social_welfare(profile: ApprovalProfile, bundle: Iterable[str],
                   instance: Optional[PBInstance] = None) -> int:
    """Total number of (voter, funded approved project) pairs."""
    funded = frozenset(bundle)
    _check_bundle(instance, funded)
    return sum(len(ballot & funded) for ballot in profile.ballots)


def representation(profile: ApprovalProfile, bundle: Iterable[str],
                   instance: Optional[PBInstance] = None) -> int:
    """Number of voters with at least one approved project funded."""
    funded = frozenset(bundle)
    _check_bundle(instance, funded)
    return sum(1 for ballot in profile.ballots if ballot & funded)


def harmonic(k: int) -> Fraction:
    """Exact harmonic number H(k); H(0) = 0 by the empty-sum convention."""
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def pav_score(profile: ApprovalProfile, bundle: Iterable[str],
              instance: Optional[PBInstance] = None) -> Fraction:
    """Sum over voters of H(number of approved funded projects)."""
    funded = frozenset(bundle)
    _check_bundle(instance, funded)
    table: dict[int, Fraction] = {}
    total = Fraction(0)
    for ballot in profile.ballots:
        k = len(ballot & funded)
        if k not in table:
            table[k] = harmonic(k)
        total += table[k]
    return total


def is_feasible(instance: PBInstance, bundle: Iterable[str]) -> bool:
    """True iff the bundle's total cost fits within the budget."""
    return instance.cost_of(bundle) <= instance.budget


def ratios(instance: PBInstance, profile: ApprovalProfile, bundle: Iterable[str],
           opt_sw: int, opt_rp: int) -> tuple[Fraction, Fraction]:
    """Welfare and representation ratios of a bundle against the instance optima.

    The optima are computed by the exact solvers; a zero optimum means no
    voter approves anything and the ratio is undefined.
    """
    if opt_sw < 1 or opt_rp < 1:
        raise DegenerateInstanceError("optimal scores must be at least 1")
    funded = frozenset(bundle)
    _check_bundle(instance, funded)
    sw = social_welfare(profile, funded)
    rp = representation(profile, funded)
    return Fraction(sw, opt_sw), Fraction(rp, opt_rp)


@dataclass(frozen=True)
class OutcomeReport:
    """Scores and ratios of one rule's outcome on one instance."""

    rule: str
    bundle: frozenset[str]
    sw: int
    rp: int
    pav: Fraction
    util_ratio: Fraction
    rep_ratio: Fraction
    ejr: str  # "satisfied" | "violated" | "unknown"

    def __post_init__(self):
        if not (0 <= self.rp <= self.sw):
            raise ValueError("representation must lie in [0, social welfare]")
        if not (0 <= self.util_ratio <= 1 and 0 <= self.rep_ratio <= 1):
            raise ValueError("ratios must lie in [0, 1]")
