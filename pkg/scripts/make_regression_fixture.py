"""Regenerate tests/fixtures/regression_n10.json from a default N=10 run.

Only run this after the full test suite passes; the fixture then pins the
numbers so later changes cannot drift silently.
"""

import argparse
import json
import tempfile
from dataclasses import replace
from pathlib import Path

from oecm.config import ExperimentConfig
from oecm.experiment import run
from oecm.hamiltonian import SpinChainSpec, build_ising, diagonalize, gap_count, spectral_statistics

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "regression_n10.json"


def regression_values(summary) -> dict:
    decomp = diagonalize(build_ising(SpinChainSpec(summary.config.n_sites)))
    stats = spectral_statistics(decomp)
    mean_spacing = decomp.spectral_range / decomp.n_levels
    values = {
        "n_levels": summary.n_levels,
        "n_pair_gaps": stats.n_pair_gaps,
        "n_distinct_gaps": summary.n_distinct_gaps,
        "mean_spacing": mean_spacing,
        "n_epsilon_mean_spacing": gap_count(stats, mean_spacing),
        "epsilon_final": summary.epsilon_final,
        "n_epsilon_final": summary.n_epsilon_final,
        "f_final": summary.f_final,
    }
    for name, res in summary.states.items():
        values[f"d_eff_{name}"] = res.d_eff
        values[f"mz_eq_{name}"] = res.mz_eq
        values[f"mean_c_final_{name}"] = float(res.mean_c[-1])
        values[f"c_of_mean_final_{name}"] = float(res.c_of_mean[-1])
        values[f"l1_of_mean_final_{name}"] = float(res.l1_of_mean[-1])
    return values


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=FIXTURE)
    args = parser.parse_args(argv)
    with tempfile.TemporaryDirectory() as tmp:
        summary = run(replace(ExperimentConfig(), output_dir=tmp), write=False)
    if not summary.all_passed:
        raise SystemExit("refusing to pin a run whose checks failed")
    args.out.write_text(json.dumps(regression_values(summary), indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
