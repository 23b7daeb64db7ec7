"""Show the worst-case constructions and verify their closed-form ratios.

Each family is a parametric election on which a specific rule performs as
badly as theory allows.  For one sample per family this prints the instance
shape, the rule's achieved ratio, the closed-form expectation, and the bound
it must stay under; then it verifies the full default sweeps.

Run with:  python3 demos/demo_adversarial.py
"""

from pbvoting.adversarial import Family, build, default_sweeps, verify


def main() -> None:
    samples = {
        Family.GREEDY_WELFARE: {"n": 30, "m": 30, "L": 1000},
        Family.GREEDY_REP: {"n": 30, "m": 30, "L": 1000},
        Family.AV_REP: {"m": 8, "x": 5, "L": 1000},
        Family.CC_WELFARE: {"n": 12, "L": 1000},
        Family.PAV_WELFARE: {"x": 50, "L": 1000},
        Family.PAV_REP: {"L": 120},
        Family.EJR_REP: {"n": 10, "L": 1000},
        Family.EJR_WELFARE: {"n": 25, "L": 1000},
    }
    for family, params in samples.items():
        case = build(family, **params)
        report = verify(case)
        print(f"{family.value}  params={params}")
        print(f"  {len(case.instance.projects)} projects, "
              f"{case.profile.n_voters} voters, target {case.target_rule}, "
              f"{case.ratio_kind} ratio")
        print(f"  achieved {report.achieved_ratio} "
              f"(expected {case.expected_ratio}), "
              f"bound ok: {report.under_bound}, verdict: "
              f"{'OK' if report.ok else 'MISMATCH'}")
        if case.notes:
            print(f"  note: {case.notes}")
        print()

    print("verifying full default sweeps...")
    total = failures = 0
    for family, param_list in default_sweeps().items():
        for params in param_list:
            total += 1
            if not verify(build(family, **params)).ok:
                failures += 1
                print(f"  MISMATCH: {family.value} {params}")
    print(f"{total - failures}/{total} sweep points verified exactly")


if __name__ == "__main__":
    main()
