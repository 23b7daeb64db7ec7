from fractions import Fraction
from pathlib import Path

import pytest

from pbvoting.bench import (ExperimentSpec, ResultRow, RuleSummary,
                            aggregate, format_ratio, parse_config,
                            rows_to_csv, run_experiment, spec_from_config,
                            summaries_to_csv)
from pbvoting.plotting import scatter_svg

DATA = Path(__file__).parent / "data"


def _city_spec(**kw):
    defaults = dict(dataset="city",
                    rules=("AV", "CC", "PAV", "sPAV", "RX"), seed=0)
    defaults.update(kw)
    return ExperimentSpec(**defaults)


def test_spec_requires_rules():
    with pytest.raises(ValueError):
        ExperimentSpec(dataset="city", rules=())
    with pytest.raises(ValueError):
        ExperimentSpec(dataset="city", rules=("AV", "XYZ"))
    with pytest.raises(ValueError):
        ExperimentSpec(dataset="city", rules=("AV",), tiebreak="bogus")


def test_city_rows_reproduce_reference_ratios():
    rows = run_experiment(_city_spec())
    by_rule = {r.rule: r for r in rows}
    assert by_rule["AV"].util_ratio == 1
    assert by_rule["AV"].rep_ratio == Fraction(1, 2)
    assert by_rule["CC"].rep_ratio == 1
    assert by_rule["PAV"].util_ratio == Fraction(77, 80)   # 0.9625
    assert by_rule["PAV"].rep_ratio == Fraction(19, 20)    # 0.95
    assert by_rule["RX"].util_ratio == Fraction(77, 80)
    assert by_rule["PAV"].ejr == "satisfied"
    assert by_rule["RX"].ejr == "satisfied"
    assert by_rule["AV"].ejr == "violated"


def test_rows_and_csv_are_deterministic():
    a = rows_to_csv(run_experiment(_city_spec()))
    b = rows_to_csv(run_experiment(_city_spec()))
    assert a == b
    assert a.startswith("instance,rule,sw,rp,util_ratio,rep_ratio,ejr,"
                        "wall_ms,reason\n")
    assert "\r" not in a


def test_superset_rules_dominate_rule_x():
    spec = ExperimentSpec(dataset="partylist-desk",
                          rules=("RX", "RX-eps", "RX-PAV"),
                          seed=0, n_instances=8)
    rows = run_experiment(spec)
    by_key = {(r.instance, r.rule): r for r in rows}
    for instance in {r.instance for r in rows}:
        base = by_key[(instance, "RX")]
        assert by_key[(instance, "RX-PAV")].sw >= base.sw
        assert by_key[(instance, "RX-eps")].rp >= base.rp


def test_aggregate_arithmetic():
    def row(rule, util, rep):
        return ResultRow("i", rule, 1, 1, Fraction(util), Fraction(rep),
                         "satisfied", None, "")
    single = aggregate([row("AV", 1, 1)])[0]
    assert single.util_mean == 1 and single.util_stderr == 0.0
    pair = aggregate([row("PAV", "9/10", "9/10"),
                      row("PAV", "11/10", "11/10")])[0]
    assert pair.util_mean == 1
    assert pair.util_stderr == pytest.approx(0.1)
    assert pair.ejr_fraction == 1


def test_aggregate_skips_failed_and_errors_when_empty():
    bad = ResultRow("i", "AV", None, None, None, None, "", None, "boom")
    good = ResultRow("i", "AV", 1, 1, Fraction(1), Fraction(1),
                     "violated", None, "")
    assert aggregate([bad, good])[0].count == 1
    with pytest.raises(ValueError):
        aggregate([bad])


def test_aggregate_ejr_unknown_propagates():
    r = ResultRow("i", "AV", 1, 1, Fraction(1), Fraction(1), "unknown",
                  None, "")
    assert aggregate([r])[0].ejr_fraction is None


def test_av_util_mean_is_exactly_one_on_generated_corpus():
    spec = ExperimentSpec(dataset="euclidean-desk", rules=("AV",),
                          seed=0, n_instances=10)
    summary = aggregate(run_experiment(spec))[0]
    assert summary.util_mean == 1
    assert format_ratio(summary.util_mean) == "1.000000"


def test_format_ratio_rounding():
    assert format_ratio(Fraction(77, 80)) == "0.962500"
    assert format_ratio(Fraction(1, 3)) == "0.333333"
    assert format_ratio(Fraction(2, 3)) == "0.666667"
    # round-half-even on an exact .0000005 tie
    assert format_ratio(Fraction(5, 10 ** 7)) == "0.000000"
    assert format_ratio(Fraction(15, 10 ** 7)) == "0.000002"


def test_parse_config_and_spec():
    text = """
    # comment
    dataset = city
    rules = AV, CC
    seed = 3
    tiebreak = lex-by-id
    """
    spec = spec_from_config(parse_config(text))
    assert spec.dataset == "city"
    assert spec.rules == ("AV", "CC")
    assert spec.seed == 3
    with pytest.raises(ValueError, match="duplicate"):
        parse_config("a=1\na=2")
    with pytest.raises(ValueError, match="key=value"):
        parse_config("just words")
    with pytest.raises(ValueError, match="unknown config key"):
        spec_from_config({"dataset": "city", "rules": "AV", "zz": "1"})


def test_scatter_svg_golden():
    rows = run_experiment(_city_spec())
    svg = scatter_svg({"city": aggregate(rows)})
    assert svg == (DATA / "city.svg").read_text(encoding="utf-8")


def test_scatter_marker_count():
    def summary(rule, util, rep):
        return RuleSummary(rule, 1, Fraction(util), 0.0, Fraction(rep),
                           0.0, Fraction(1))
    svg = scatter_svg({
        "d1": [summary("AV", 1, "1/2"), summary("CC", "1/2", 1)],
        "d2": [summary("AV", "3/4", "3/4")],
    })
    # 3 data markers + 2 legend shape markers for the 2 distinct rules
    assert svg.count("<circle") == 2 + 1   # AV twice + legend circle
    assert svg.count("<rect") >= 1 + 1 + 2  # CC marker, legend fills, frames
    with pytest.raises(ValueError):
        scatter_svg({})
