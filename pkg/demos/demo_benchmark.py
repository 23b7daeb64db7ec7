"""Run a small benchmark over a synthetic corpus and emit CSV + SVG.

Generates 10 Euclidean elections and 10 party-list elections, runs all seven
rules with seeded random tie-breaking, prints the per-rule summary table and
writes the artifacts (per-run CSV, summary CSV, trade-off scatter SVG) into
demos/out/.  Re-running reproduces every file byte for byte.

Run with:  python3 demos/demo_benchmark.py
"""

from pathlib import Path

from pbvoting.bench import (ExperimentSpec, aggregate, rows_to_csv,
                            run_experiment, summaries_to_csv,
                            summaries_to_text)
from pbvoting.plotting import scatter_svg

OUT = Path(__file__).parent / "out"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    rules = ("AV", "CC", "PAV", "sPAV", "RX", "RX-eps", "RX-PAV")
    corpus_summaries = {}
    for dataset in ("euclidean-desk", "partylist-desk"):
        spec = ExperimentSpec(dataset=dataset, rules=rules, seed=0,
                              n_instances=10, t_cap=10 ** 9)
        rows = run_experiment(spec)
        summaries = aggregate(rows)
        corpus_summaries[dataset] = summaries
        (OUT / f"{dataset}-rows.csv").write_text(rows_to_csv(rows))
        (OUT / f"{dataset}-summary.csv").write_text(
            summaries_to_csv(summaries))
        print(f"=== {dataset} (10 instances, seed 0) ===")
        print(summaries_to_text(summaries))
        print()

    svg = scatter_svg(corpus_summaries)
    (OUT / "tradeoff.svg").write_text(svg)
    print(f"artifacts written to {OUT}/ "
          "(rows CSV, summary CSV per corpus, tradeoff.svg)")


if __name__ == "__main__":
    main()
