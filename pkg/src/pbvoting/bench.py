"""Benchmark harness: run rules over datasets, produce ratio/EJR tables.

A run is described by an :class:`ExperimentSpec`; :func:`run_experiment`
executes every instance x rule pair and returns one :class:`ResultRow` per
pair.  Ratios are exact rationals serialized as 6-decimal strings, so a rerun
with the same spec and seed produces byte-identical CSV output.  Wall-clock
times are recorded only when explicitly requested, because timing noise would
break that byte-level determinism.

Random tie-breaking derives one seed per (spec seed, instance id, rule) from
a SHA-256 hash, so adding a rule or an instance to a spec never changes the
draws of existing rows.  Rows are sorted by (instance, rule) before output;
execution order can therefore never change the bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from .core import (ApprovalProfile, PBInstance, representation,
                   social_welfare)
from .datagen import PRESETS, generate
from .exact import (SearchBudget, SearchBudgetExceeded, TieBreakPolicy,
                    optimum_value, solve_av, solve_cc, solve_pav)
from .fairness import find_ejr_violation
from .instances import city, tiny
from .pabulib import parse_pb
from .sequential import rule_x, rule_x_eps, rule_x_pav, seq_pav

RULE_NAMES = ("AV", "CC", "PAV", "sPAV", "RX", "RX-eps", "RX-PAV")

CSV_COLUMNS = ("instance", "rule", "sw", "rp", "util_ratio", "rep_ratio",
               "ejr", "wall_ms", "reason")


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: str                      # city | tiny | generator/preset name | pabulib:<path>
    rules: tuple[str, ...]
    seed: int = 0
    n_instances: int = 1              # generator datasets only
    tiebreak: str = "random"          # TieBreakPolicy variant
    t_cap: Optional[int] = None       # None: per-instance default cap
    max_nodes: int = 2_000_000
    rx_eps_mode: str = "limit"
    record_time: bool = False

    def __post_init__(self):
        if not self.rules:
            raise ValueError("spec needs at least one rule")
        for rule in self.rules:
            if rule not in RULE_NAMES:
                raise ValueError(
                    f"unknown rule {rule!r}; choose from {RULE_NAMES}")
        if self.tiebreak not in ("random", "lex-by-id", "cheapest-first",
                                 "worst-sw", "worst-rp"):
            raise ValueError(f"unknown tie-break {self.tiebreak!r}")
        if self.n_instances < 1:
            raise ValueError("n_instances must be positive")


@dataclass(frozen=True)
class ResultRow:
    instance: str
    rule: str
    sw: Optional[int]
    rp: Optional[int]
    util_ratio: Optional[Fraction]
    rep_ratio: Optional[Fraction]
    ejr: str                          # verdict status, or "" on failure
    wall_ms: Optional[int]
    reason: str                       # "" on success

    @property
    def ok(self) -> bool:
        return not self.reason


@dataclass(frozen=True)
class RuleSummary:
    rule: str
    count: int
    util_mean: Fraction
    util_stderr: float
    rep_mean: Fraction
    rep_stderr: float
    ejr_fraction: Optional[Fraction]  # None when any verdict is unknown


def format_ratio(value: Fraction) -> str:
    """Exact round-half-even serialization with 6 decimal places."""
    scaled = round(value * 10 ** 6)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 10 ** 6}.{scaled % 10 ** 6:06d}"


def _tie_seed(spec_seed: int, instance_id: str, rule: str) -> int:
    digest = hashlib.sha256(
        f"{spec_seed}:{instance_id}:{rule}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _policy(spec: ExperimentSpec, instance_id: str, rule: str) -> TieBreakPolicy:
    if spec.tiebreak == "random":
        return TieBreakPolicy.random_seeded(
            _tie_seed(spec.seed, instance_id, rule))
    return TieBreakPolicy(spec.tiebreak)


def _greedy_policy(policy: TieBreakPolicy) -> TieBreakPolicy:
    # the greedy selector has no tie *set* to minimize a secondary score
    # over, so worst-* policies fall back to the rule's default
    if policy.variant in ("worst-sw", "worst-rp"):
        return TieBreakPolicy.cheapest()
    return policy


def run_rule(rule: str, instance: PBInstance, profile: ApprovalProfile,
             policy: TieBreakPolicy, search_budget: SearchBudget,
             rx_eps_mode: str = "limit") -> frozenset:
    if rule == "AV":
        return solve_av(instance, profile, policy, search_budget)
    if rule == "CC":
        return solve_cc(instance, profile, policy, search_budget)
    if rule == "PAV":
        return solve_pav(instance, profile, policy, search_budget)
    if rule == "sPAV":
        return seq_pav(instance, profile, _greedy_policy(policy))
    if rule == "RX":
        return rule_x(instance, profile)
    if rule == "RX-eps":
        return rule_x_eps(instance, profile, rx_eps_mode)
    if rule == "RX-PAV":
        return rule_x_pav(instance, profile, policy, search_budget)
    raise ValueError(f"unknown rule {rule!r}")


def load_dataset(spec: ExperimentSpec
                 ) -> list[tuple[str, PBInstance, ApprovalProfile]]:
    name = spec.dataset
    if name == "city":
        return [("city", *city())]
    if name == "tiny":
        return [("tiny", *tiny())]
    if name in PRESETS or name in ("euclidean", "partylist"):
        out = []
        for k in range(spec.n_instances):
            seed = spec.seed + k
            inst, prof = generate(name, seed)
            out.append((f"{name}-{seed:05d}", inst, prof))
        return out
    if name.startswith("pabulib:"):
        path = Path(name.split(":", 1)[1])
        files = sorted(path.glob("*.pb")) if path.is_dir() else [path]
        if not files:
            raise FileNotFoundError(f"no .pb files under {path}")
        out = []
        for f in files:
            inst, prof, _ = parse_pb(f.read_text(encoding="utf-8"))
            out.append((f.stem, inst, prof))
        return out
    raise ValueError(f"unknown dataset {name!r}")


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    instances = load_dataset(spec)
    budget = SearchBudget(spec.max_nodes)
    rows: list[ResultRow] = []
    for instance_id, inst, prof in instances:
        try:
            opt_sw = optimum_value("sw", inst, prof, budget)
            opt_rp = optimum_value("rp", inst, prof, budget)
        except SearchBudgetExceeded as e:
            for rule in spec.rules:
                rows.append(ResultRow(instance_id, rule, None, None, None,
                                      None, "", None, f"optima: {e}"))
            continue
        for rule in spec.rules:
            t0 = time.perf_counter()
            try:
                bundle = run_rule(rule, inst, prof,
                                  _policy(spec, instance_id, rule), budget,
                                  spec.rx_eps_mode)
            except SearchBudgetExceeded as e:
                rows.append(ResultRow(instance_id, rule, None, None, None,
                                      None, "", None, str(e)))
                continue
            sw = social_welfare(prof, bundle)
            rp = representation(prof, bundle)
            verdict = find_ejr_violation(inst, prof, bundle, spec.t_cap)
            ms = (int(round((time.perf_counter() - t0) * 1000))
                  if spec.record_time else None)
            rows.append(ResultRow(
                instance_id, rule, sw, rp,
                Fraction(sw, opt_sw) if opt_sw else None,
                Fraction(rp, opt_rp) if opt_rp else None,
                verdict.status, ms, ""))
    rows.sort(key=lambda r: (r.instance, r.rule))
    if rows and not any(r.ok for r in rows):
        raise RuntimeError("every row failed; check the search budget")
    return rows


def aggregate(rows: Sequence[ResultRow]) -> list[RuleSummary]:
    """Per-rule mean and standard error of both ratios, plus EJR fraction."""
    by_rule: dict[str, list[ResultRow]] = {}
    for row in rows:
        if row.ok and row.util_ratio is not None and row.rep_ratio is not None:
            by_rule.setdefault(row.rule, []).append(row)
    if not by_rule:
        raise ValueError("no successful rows to aggregate")
    out = []
    for rule in sorted(by_rule):
        got = by_rule[rule]
        k = len(got)
        utils = [r.util_ratio for r in got]
        reps = [r.rep_ratio for r in got]
        ejr = None
        if all(r.ejr != "unknown" for r in got):
            ejr = Fraction(sum(1 for r in got if r.ejr == "satisfied"), k)
        out.append(RuleSummary(rule, k, _mean(utils), _stderr(utils),
                               _mean(reps), _stderr(reps), ejr))
    return out


def _mean(values: Sequence[Fraction]) -> Fraction:
    return sum(values, Fraction(0)) / len(values)


def _stderr(values: Sequence[Fraction]) -> float:
    k = len(values)
    if k < 2:
        return 0.0
    mu = _mean(values)
    var = sum((v - mu) ** 2 for v in values) / (k - 1)
    return math.sqrt(float(var) / k)


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([
            r.instance, r.rule,
            "" if r.sw is None else r.sw,
            "" if r.rp is None else r.rp,
            "" if r.util_ratio is None else format_ratio(r.util_ratio),
            "" if r.rep_ratio is None else format_ratio(r.rep_ratio),
            r.ejr,
            "" if r.wall_ms is None else r.wall_ms,
            r.reason,
        ])
    return buf.getvalue()


def summaries_to_csv(summaries: Sequence[RuleSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rule", "count", "util_mean", "util_stderr",
                     "rep_mean", "rep_stderr", "ejr_pct"])
    for s in summaries:
        writer.writerow([
            s.rule, s.count,
            format_ratio(s.util_mean), f"{s.util_stderr:.6f}",
            format_ratio(s.rep_mean), f"{s.rep_stderr:.6f}",
            "" if s.ejr_fraction is None else format_ratio(
                100 * s.ejr_fraction),
        ])
    return buf.getvalue()


def summaries_to_text(summaries: Sequence[RuleSummary]) -> str:
    header = (f"{'rule':8s} {'n':>4s} {'util':>8s} {'+/-':>8s} "
              f"{'rep':>8s} {'+/-':>8s} {'ejr%':>10s}")
    lines = [header, "-" * len(header)]
    for s in summaries:
        ejr = ("?" if s.ejr_fraction is None
               else format_ratio(100 * s.ejr_fraction))
        lines.append(
            f"{s.rule:8s} {s.count:4d} {format_ratio(s.util_mean):>8s} "
            f"{s.util_stderr:8.6f} {format_ratio(s.rep_mean):>8s} "
            f"{s.rep_stderr:8.6f} {ejr:>10s}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> dict[str, str]:
    """Flat key=value config; '#' starts a comment, blank lines ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, "
                             f"got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key in out:
            raise ValueError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def spec_from_config(values: dict[str, str]) -> ExperimentSpec:
    known = {"dataset", "rules", "seed", "instances", "tiebreak", "tcap",
             "max_nodes", "rx_eps_mode", "record_time"}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config key(s) {sorted(unknown)}")
    if "dataset" not in values or "rules" not in values:
        raise ValueError("config needs at least dataset= and rules=")
    return ExperimentSpec(
        dataset=values["dataset"],
        rules=tuple(r.strip() for r in values["rules"].split(",") if r.strip()),
        seed=int(values.get("seed", "0")),
        n_instances=int(values.get("instances", "1")),
        tiebreak=values.get("tiebreak", "random"),
        t_cap=int(values["tcap"]) if "tcap" in values else None,
        max_nodes=int(values.get("max_nodes", "2000000")),
        rx_eps_mode=values.get("rx_eps_mode", "limit"),
        record_time=values.get("record_time", "false").lower() == "true",
    )
