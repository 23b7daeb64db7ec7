"""Walk through the built-in three-district city instance.

Runs every rule on the same election, prints scores, ratios and fairness
verdicts, and shows where the rules disagree: welfare maximization funds a
single district, coverage maximization touches every district, and the
harmonic-score rules land in between.

Run with:  python3 demos/demo_city.py
"""

from fractions import Fraction

from pbvoting.core import representation, social_welfare
from pbvoting.exact import (TieBreakPolicy, optimum_value, solve_av, solve_cc,
                            solve_pav)
from pbvoting.fairness import find_ejr_violation, max_t_cap
from pbvoting.instances import city
from pbvoting.sequential import rule_x, rule_x_eps, rule_x_pav, seq_pav


def describe(bundle: frozenset) -> str:
    return ", ".join(sorted(bundle))


def main() -> None:
    instance, profile = city()
    print(f"budget {instance.budget}, {len(instance.projects)} projects, "
          f"{profile.n_voters} voters\n")

    sw_opt = optimum_value("sw", instance, profile)
    rp_opt = optimum_value("rp", instance, profile)
    print(f"best attainable welfare {sw_opt}, best coverage {rp_opt}\n")

    worst_sw = TieBreakPolicy.worst_sw()
    rules = {
        "AV   (max total approvals)": solve_av(instance, profile, worst_sw),
        "CC   (max voters covered)": solve_cc(instance, profile, worst_sw),
        "PAV  (max harmonic score)": solve_pav(instance, profile, worst_sw),
        "sPAV (greedy harmonic)": seq_pav(instance, profile),
        "RX   (equal shares)": rule_x(instance, profile),
        "RX-e (equal shares + exhaust)": rule_x_eps(instance, profile),
        "RX-PAV (equal shares + PAV)": rule_x_pav(instance, profile),
    }
    cap = max_t_cap(instance)
    for name, bundle in rules.items():
        sw = social_welfare(profile, bundle)
        rp = representation(profile, bundle)
        verdict = find_ejr_violation(instance, profile, bundle, cap)
        print(f"{name}")
        print(f"  funds: {describe(bundle)}")
        print(f"  welfare {sw} (ratio {Fraction(sw, sw_opt)}), "
              f"coverage {rp} (ratio {Fraction(rp, rp_opt)}), "
              f"fairness: {verdict.status}")
        if verdict.witness is not None:
            group = sorted(verdict.witness.voters)
            head = ", ".join(map(str, group[:6]))
            more = "..." if len(group) > 6 else ""
            print(f"  slighted group: voters [{head}{more}] "
                  f"deserve {describe(verdict.witness.projects)}")
        print()


if __name__ == "__main__":
    main()
