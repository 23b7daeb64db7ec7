"""Command-line interface.

Subcommands::

    pbbench solve       one instance, one rule, human-readable result
    pbbench bench       run an experiment spec, emit CSV/SVG artifacts
    pbbench generate    write synthetic instances as .pb files
    pbbench check-ejr   audit a specific bundle for EJR
    pbbench adversarial verify the worst-case families

Exit codes: 0 success, 1 partial failure (failed rows, violated/failed
checks), 2 usage or spec error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

from .adversarial import Family, build, default_sweeps, verify
from .bench import (ExperimentSpec, aggregate, format_ratio, load_dataset,
                    parse_config, rows_to_csv, run_experiment, run_rule,
                    spec_from_config, summaries_to_csv, summaries_to_text)
from .core import representation, social_welfare
from .datagen import PRESETS, generate
from .exact import SearchBudget, TieBreakPolicy, optimum_value
from .fairness import find_ejr_violation
from .pabulib import parse_pb, write_pb


def _dataset_args(p: argparse.ArgumentParser):
    p.add_argument("--dataset", help="city | tiny | euclidean | partylist | "
                   "pabulib:<path> | preset name")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="shorthand for --dataset <preset>")
    p.add_argument("--seed", type=int, default=0)


def _resolve_dataset(args) -> str:
    if args.preset and args.dataset:
        raise ValueError("give either --dataset or --preset, not both")
    dataset = args.preset or args.dataset
    if not dataset:
        raise ValueError("a dataset is required (--dataset or --preset)")
    return dataset


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pbbench",
        description="participatory-budgeting rules benchmark harness")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one rule on one instance")
    _dataset_args(p)
    p.add_argument("--rule", required=True)
    p.add_argument("--tiebreak", default="lex-by-id")
    p.add_argument("--tie-seed", type=int, default=0,
                   help="seed for --tiebreak random")
    p.add_argument("--tcap", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=2_000_000)
    p.add_argument("--rx-eps-mode", default="limit")

    p = sub.add_parser("bench", help="run an experiment, emit CSV/SVG")
    p.add_argument("--config", help="flat key=value spec file")
    _dataset_args(p)
    p.add_argument("--rules", help="comma-separated rule names")
    p.add_argument("--instances", type=int, default=1)
    p.add_argument("--tiebreak", default="random")
    p.add_argument("--tcap", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=2_000_000)
    p.add_argument("--out-csv", help="write per-row results here")
    p.add_argument("--out-summary-csv", help="write per-rule summaries here")
    p.add_argument("--out-svg", help="write the ratio scatter plot here")
    p.add_argument("--record-time", action="store_true")

    p = sub.add_parser("generate", help="write synthetic .pb files")
    _dataset_args(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("check-ejr", help="audit a bundle for EJR")
    _dataset_args(p)
    p.add_argument("--bundle", required=True,
                   help="comma-separated project ids")
    p.add_argument("--tcap", type=int, default=None)

    p = sub.add_parser("adversarial", help="verify worst-case families")
    p.add_argument("--family", default="all",
                   choices=["all"] + [f.value for f in Family])
    p.add_argument("--out-csv")
    return top


def _cmd_solve(args) -> int:
    dataset = _resolve_dataset(args)
    spec = ExperimentSpec(dataset=dataset, rules=("AV",), seed=args.seed)
    instance_id, inst, prof = load_dataset(spec)[0]
    policy = (TieBreakPolicy.random_seeded(args.tie_seed)
              if args.tiebreak == "random" else TieBreakPolicy(args.tiebreak))
    budget = SearchBudget(args.max_nodes)
    bundle = run_rule(args.rule, inst, prof, policy, budget, args.rx_eps_mode)
    sw = social_welfare(prof, bundle)
    rp = representation(prof, bundle)
    opt_sw = optimum_value("sw", inst, prof, budget)
    opt_rp = optimum_value("rp", inst, prof, budget)
    verdict = find_ejr_violation(inst, prof, bundle, args.tcap)
    print(f"instance    {instance_id}")
    print(f"rule        {args.rule}")
    print(f"bundle      {','.join(sorted(bundle))}")
    print(f"cost        {inst.cost_of(bundle)} / {inst.budget}")
    print(f"sw          {sw} (ratio {format_ratio(Fraction(sw, opt_sw))})"
          if opt_sw else f"sw          {sw}")
    print(f"rp          {rp} (ratio {format_ratio(Fraction(rp, opt_rp))})"
          if opt_rp else f"rp          {rp}")
    print(f"ejr         {verdict.status}")
    if verdict.witness:
        print(f"witness     T={sorted(verdict.witness.projects)} "
              f"|S|={len(verdict.witness.voters)}")
    return 0


def _cmd_bench(args) -> int:
    if args.config:
        spec = spec_from_config(
            parse_config(Path(args.config).read_text(encoding="utf-8")))
    else:
        dataset = _resolve_dataset(args)
        if not args.rules:
            raise ValueError("--rules is required without --config")
        spec = ExperimentSpec(
            dataset=dataset,
            rules=tuple(r.strip() for r in args.rules.split(",") if r.strip()),
            seed=args.seed, n_instances=args.instances,
            tiebreak=args.tiebreak, t_cap=args.tcap,
            max_nodes=args.max_nodes, record_time=args.record_time)
    rows = run_experiment(spec)
    summaries = aggregate(rows)
    print(summaries_to_text(summaries), end="")
    if args.out_csv:
        Path(args.out_csv).write_text(rows_to_csv(rows), encoding="utf-8")
    if args.out_summary_csv:
        Path(args.out_summary_csv).write_text(
            summaries_to_csv(summaries), encoding="utf-8")
    if args.out_svg:
        from .plotting import emit_scatter
        emit_scatter({spec.dataset: summaries}, args.out_svg)
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"FAILED {r.instance} {r.rule}: {r.reason}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_generate(args) -> int:
    dataset = _resolve_dataset(args)
    if dataset not in PRESETS and dataset not in ("euclidean", "partylist"):
        raise ValueError(f"generate needs a generator dataset, got {dataset!r}")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        seed = args.seed + k
        inst, prof = generate(dataset, seed)
        text = write_pb(inst, prof, {"description": f"{dataset} seed {seed}"})
        (out / f"{dataset}-{seed:05d}.pb").write_text(text, encoding="utf-8")
    print(f"wrote {args.count} file(s) to {out}")
    return 0


def _cmd_check_ejr(args) -> int:
    dataset = _resolve_dataset(args)
    spec = ExperimentSpec(dataset=dataset, rules=("AV",), seed=args.seed)
    instance_id, inst, prof = load_dataset(spec)[0]
    bundle = frozenset(s.strip() for s in args.bundle.split(",") if s.strip())
    verdict = find_ejr_violation(inst, prof, bundle, args.tcap)
    print(f"instance  {instance_id}")
    print(f"bundle    {','.join(sorted(bundle))}")
    print(f"verdict   {verdict.status} (t_cap {verdict.cap})")
    if verdict.witness:
        print(f"witness   T={sorted(verdict.witness.projects)} "
              f"|S|={len(verdict.witness.voters)}")
    return 0 if verdict.ok else 1


def _cmd_adversarial(args) -> int:
    sweeps = default_sweeps()
    families = ([Family(args.family)] if args.family != "all"
                else list(sweeps))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["family", "params", "rule", "kind", "achieved",
                     "expected", "bound", "ok"])
    bad = 0
    for family in families:
        for params in sweeps[family]:
            report = verify(build(family, **params))
            case = report.case
            ok = report.ok
            bad += not ok
            writer.writerow([
                family.value,
                " ".join(f"{k}={v}" for k, v in params.items()),
                case.target_rule, case.ratio_kind,
                format_ratio(report.achieved_ratio),
                format_ratio(case.expected_ratio),
                f"{case.bound_value:.6f}", "yes" if ok else "NO"])
            status = "ok " if ok else "BAD"
            print(f"{status} {family.value:15s} "
                  f"{' '.join(f'{k}={v}' for k, v in params.items()):24s} "
                  f"ratio={format_ratio(report.achieved_ratio)} "
                  f"bound={case.bound_value:.6f}")
    if args.out_csv:
        Path(args.out_csv).write_text(buf.getvalue(), encoding="utf-8")
    return 1 if bad else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "generate": _cmd_generate,
        "check-ejr": _cmd_check_ejr,
        "adversarial": _cmd_adversarial,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, FileNotFoundError, NotADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
