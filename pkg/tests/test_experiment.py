import csv

import numpy as np
import pytest

from oecm.experiment import CHECKS, FIGURE_FILES

pytestmark = pytest.mark.slow


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_every_check_passes_on_the_default_run(default_run):
    summary, out = default_run
    assert summary.all_passed
    with open(out / "summary.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["state"] for r in rows] == ["up", "dw", "pm"]
    for row in rows:
        assert all(row[c] == "true" for c in CHECKS)
        assert float(row["d_eff"]) == summary.states[row["state"]].d_eff
        assert int(row["N_epsilon_final"]) == summary.n_epsilon_final == 625


def test_up_entropy_stays_furthest_from_equilibrium(default_run):
    summary, _ = default_run
    gap = {k: abs(r.entropy_mean[-1] - r.entropy_eq) for k, r in summary.states.items()}
    assert gap["up"] > gap["dw"] and gap["up"] > gap["pm"]


def test_emitted_entropies_lie_in_unit_interval(default_run):
    _, out = default_run
    for name in ("fig3a.csv", "fig3b.csv"):
        _, values = load(out / name)
        assert np.all((values[:, 1:] >= 0) & (values[:, 1:] <= 1))


def test_probability_rows_are_normalized(default_run):
    summary, _ = default_run
    for res in summary.states.values():
        assert np.max(np.abs(res.probs.sum(axis=1) - 1)) <= 1e-10
        assert np.max(np.abs(res.mean_probs.sum(axis=1) - 1)) <= 1e-10
        assert abs(res.p_inf.sum() - 1) <= 1e-10


def test_file_schema_and_grid(default_run):
    summary, out = default_run
    for name in FIGURE_FILES:
        header, values = load(out / name)
        assert header[0] in ("t", "T")
        assert values.shape == (20001, len(header))
        assert np.array_equal(values[:, 0], summary.times)


def test_bound_columns_match_their_formula(default_run):
    summary, out = default_run
    header, values = load(out / "fig5a.csv")
    col = {h: values[:, i] for i, h in enumerate(header)}
    r, base = summary.rank, summary.base
    for state, res in summary.states.items():
        want = np.log(r) / np.log(base) / 2 * np.sqrt(r * col["f"][1:] / res.d_eff)
        assert col[f"bound_{state}"][1:] == pytest.approx(want, rel=1e-12)
        assert np.all(col[f"mean_C_{state}"] <= col[f"bound_{state}"])
    assert np.isinf(col["f"][0])
