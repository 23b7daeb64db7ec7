"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's search code: exhaustive
bitmask enumeration for the optimizers, a full subset scan for the fairness
checker, and a breakpoint solve for the payment threshold.  Tests compare
the fast implementations against these.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from pbvoting.core import ApprovalProfile, PBInstance, Project, harmonic
from pbvoting.instances import city, tiny


def pytest_terminal_summary(terminalreporter):
    """Print one status line per acceptance criterion after the run."""
    try:
        from test_acceptance import LABELS, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(LABELS):
        status = RESULTS.get(n, "NOT RUN")
        terminalreporter.write_line(f"criterion {n} ({LABELS[n]}): {status}")


@pytest.fixture(scope="session")
def city_pair():
    return city()


@pytest.fixture(scope="session")
def tiny_pair():
    return tiny()


# ---------------------------------------------------------------------------
# exhaustive optimizer oracle (bitmask subsets, fine up to ~16 projects)

def oracle_search(instance: PBInstance, profile: ApprovalProfile,
                  objective: str):
    """(optimal value, list of inclusion-maximal optimal bundles)."""
    ids = list(instance.project_ids)
    m = len(ids)
    costs = [instance.cost(pid) for pid in ids]
    voter_masks = []
    for ballot in profile.ballots:
        mask = 0
        for j, pid in enumerate(ids):
            if pid in ballot:
                mask |= 1 << j
        voter_masks.append(mask)

    def value(mask):
        if objective == "sw":
            return sum((vm & mask).bit_count() for vm in voter_masks)
        if objective == "rp":
            return sum(1 for vm in voter_masks if vm & mask)
        return sum((harmonic((vm & mask).bit_count()) for vm in voter_masks),
                   Fraction(0))

    def cost(mask):
        total = Fraction(0)
        k = mask
        while k:
            low = k & -k
            total += costs[low.bit_length() - 1]
            k ^= low
        return total

    feasible = [mask for mask in range(1 << m)
                if cost(mask) <= instance.budget]
    best = max(value(mask) for mask in feasible)
    optima = []
    fset = set(feasible)
    for mask in feasible:
        if value(mask) != best:
            continue
        maximal = all((mask | (1 << j)) not in fset
                      for j in range(m) if not mask & (1 << j))
        if maximal:
            optima.append(frozenset(ids[j] for j in range(m)
                                    if mask & (1 << j)))
    return best, optima


# ---------------------------------------------------------------------------
# brute-force fairness oracle: scan every jointly-approved project set

def oracle_ejr_violated(instance: PBInstance, profile: ApprovalProfile,
                        bundle: frozenset) -> bool:
    """True iff some cohesive group is under-served by the bundle.

    For any violating (S, T) the group of *all* under-represented supporters
    of T also violates, so scanning each T with that canonical group decides
    the property.  T ranges over all affordable project subsets.
    """
    ids = list(instance.project_ids)
    m = len(ids)
    n = profile.n_voters
    if n == 0:
        return False
    share = Fraction(instance.budget, n)
    overlap = [len(ballot & bundle) for ballot in profile.ballots]
    for mask in range(1, 1 << m):
        T = frozenset(ids[j] for j in range(m) if mask & (1 << j))
        if instance.cost_of(T) > instance.budget:
            continue
        supporters = [i for i in range(n)
                      if T <= profile.ballots[i] and overlap[i] < len(T)]
        if supporters and share * len(supporters) >= instance.cost_of(T):
            return True
    return False


# ---------------------------------------------------------------------------
# payment-threshold oracle: solve on the sorted breakpoint segments

def oracle_q(cost, budgets, utilities):
    cost = Fraction(cost)
    pairs = [(Fraction(b), Fraction(u)) for b, u in zip(budgets, utilities)
             if u > 0]
    if sum((b for b, _ in pairs), Fraction(0)) < cost:
        return None

    def paid(q):
        return sum((min(b, u * q) for b, u in pairs), Fraction(0))

    breakpoints = sorted({b / u for b, u in pairs})
    prev = Fraction(0)
    for bp in breakpoints + [None]:
        # on (prev, bp] the set of budget-capped voters is constant
        capped = sum((b for b, u in pairs if b / u <= prev), Fraction(0))
        slope = sum((u for b, u in pairs if b / u > prev), Fraction(0))
        if slope > 0:
            q = (cost - capped) / slope
            if q > prev and (bp is None or q <= bp):
                assert paid(q) == cost
                return q
        prev = bp
    raise AssertionError("no segment solved; inputs degenerate")


# ---------------------------------------------------------------------------
# random small instances for oracle comparisons

def random_instance(seed: int, max_projects: int = 12
                    ) -> tuple[PBInstance, ApprovalProfile]:
    rng = random.Random(seed)
    m = rng.randint(1, max_projects)
    n = rng.randint(1, 8)
    projects = tuple(Project(f"p{j:02d}", rng.randint(1, 20))
                     for j in range(m))
    total = sum(p.cost for p in projects)
    budget = Fraction(rng.randint(1, int(total)))
    ballots = []
    for _ in range(n):
        k = rng.randint(0, m)
        ballots.append(frozenset(rng.sample([p.id for p in projects], k)))
    return PBInstance(projects, budget), ApprovalProfile(tuple(ballots))
