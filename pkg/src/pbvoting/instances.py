"""Small built-in instances used by the CLI, the demos and the tests."""

from __future__ import annotations

from .core import ApprovalProfile, PBInstance, Project


def city() -> tuple[PBInstance, ApprovalProfile]:
    """Three-district city with a $1000 budget.

    District A (100 voters) wants 2 diamond projects ($200) and 6 gold
    projects ($100); district B (90 voters) wants 3 diamonds and 3 emeralds
    ($150); district C (10 voters) wants 1 emerald and 1 gold.  Every voter
    approves exactly their district's list.  The instance separates the
    rules sharply: welfare maximization funds district A alone, coverage
    maximization scatters one project per district, and the harmonic-score
    rules land in between.
    """
    projects = (
        [Project(f"A-d{i}", 200) for i in range(2)]
        + [Project(f"A-g{i}", 100) for i in range(6)]
        + [Project(f"B-d{i}", 200) for i in range(3)]
        + [Project(f"B-e{i}", 150) for i in range(3)]
        + [Project("C-e0", 150), Project("C-g0", 100)]
    )
    instance = PBInstance(tuple(projects), 1000)
    by_district = {
        "A": frozenset(p.id for p in projects if p.id.startswith("A")),
        "B": frozenset(p.id for p in projects if p.id.startswith("B")),
        "C": frozenset(p.id for p in projects if p.id.startswith("C")),
    }
    ballots = [by_district["A"]] * 100 + [by_district["B"]] * 90 \
        + [by_district["C"]] * 10
    return instance, ApprovalProfile(tuple(ballots))


def tiny() -> tuple[PBInstance, ApprovalProfile]:
    """Three projects, three voters, budget 3; the smallest instance on
    which welfare and coverage maximization disagree about tie-breaking."""
    instance = PBInstance(
        (Project("p1", 1), Project("p2", 1), Project("p3", 2)), 3)
    profile = ApprovalProfile((
        frozenset({"p1", "p2"}), frozenset({"p1"}), frozenset({"p3"})))
    return instance, profile
