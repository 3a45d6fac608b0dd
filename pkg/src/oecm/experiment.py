"""Batch pipeline: one spin chain, several initial states, every series and bound check."""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .complexity import ComplexityRecord, asymptotic_bound, oecm, shannon_entropy, theorem1_bound
from .config import ExperimentConfig, dump_config, output_path, validate
from .dynamics import TimeGrid, dephase, effective_dimension, prepare, probability_series, running_average
from .errors import ConfigError
from .hamiltonian import (
    SpinChainSpec,
    build_ising,
    diagonalize,
    gap_count,
    minimal_spectral_factor,
    spectral_factor,
    spectral_statistics,
)
from .hilbert import product_state
from .observables import equilibrium_probabilities, magnetization_observable
from .typicality import deviation_experiment

log = logging.getLogger(__name__)

LEMMA_SLACK = 1e-8
BOUND_SLACK = 1e-12

CHECKS = ("theorem1_mean", "theorem1_of_mean", "lemma1", "reimann", "meier", "cauchy_schwarz", "entropy_range", "normalization")

FIGURE_FILES = tuple(f"fig{i}{p}.csv" for i in range(1, 6) for p in "ab")


@dataclass
class StateResult:
    """Every per-state series on the run's time grid (index 0 is t = 0)."""

    name: str
    d_eff: float
    purity: float
    p_inf: np.ndarray
    probs: np.ndarray
    mean_probs: np.ndarray
    mz: np.ndarray
    mz_mean: np.ndarray
    mz_eq: float
    entropy: np.ndarray
    entropy_mean: np.ndarray
    entropy_eq: float
    l1: np.ndarray
    l1_mean: np.ndarray
    l1_of_mean: np.ndarray
    mean_c: np.ndarray
    c_of_mean: np.ndarray
    bound: np.ndarray
    bound_asymptotic: float
    checks: dict = field(default_factory=dict)
    asymptotic_checks: dict = field(default_factory=dict)


@dataclass
class RunSummary:
    config: ExperimentConfig
    n_levels: int
    rank: int
    base: float
    n_distinct_gaps: int
    gaps_nondegenerate: bool
    epsilon_final: float
    n_epsilon_final: int
    f_final: float
    times: np.ndarray
    epsilon: np.ndarray
    f: np.ndarray
    states: dict
    timings: dict
    typicality: object = None

    @property
    def flags(self) -> dict:
        out = {}
        for name, res in self.states.items():
            for check, ok in res.checks.items():
                out[f"{name}.{check}"] = ok
        if self.typicality is not None:
            rep = self.typicality
            out["typicality.markov"] = not rep.violated
            out["typicality.mean_bound"] = rep.mean_bound_holds
            out["typicality.jensen"] = rep.jensen_holds
        return out

    @property
    def all_passed(self) -> bool:
        return all(self.flags.values())


def _resolve_base(cfg: ExperimentConfig, rank: int) -> float:
    if cfg.entropy_base == "rank":
        if rank < 2:
            raise ConfigError(["entropy_base: 'rank' needs an observable with at least two outcomes"])
        return float(rank)
    return float(cfg.entropy_base)


def _spectral_factor_series(stats, epsilon, T):
    f = np.full(T.shape, np.inf)
    pos = T > 0
    if epsilon == "auto":
        return minimal_spectral_factor(stats, T)
    f[pos] = spectral_factor(stats, float(epsilon), T[pos])
    return f, np.full(T.shape, float(epsilon))


def analyse_state(name, decomp, obs, times, f, base) -> StateResult:
    psi0 = product_state(name, int(round(math.log2(decomp.dim))))
    state = prepare(decomp, psi0)
    omega = dephase(decomp, psi0)
    d_eff = effective_dimension(decomp, psi0)
    p_inf = equilibrium_probabilities(obs, omega)
    r = obs.rank

    probs = probability_series(state, obs, times)
    mean_probs = running_average(probs, times)
    mz = probs @ obs.outcomes
    mz_eq = float(p_inf @ obs.outcomes)
    record = ComplexityRecord.from_probabilities(times, probs, p_inf, base)
    l1_of_mean = np.sum(np.abs(mean_probs - p_inf), axis=1)
    res = StateResult(
        name=name,
        d_eff=d_eff,
        purity=omega.purity(),
        p_inf=p_inf,
        probs=probs,
        mean_probs=mean_probs,
        mz=mz,
        mz_mean=running_average(mz, times),
        mz_eq=mz_eq,
        entropy=record.entropy,
        entropy_mean=running_average(record.entropy, times),
        entropy_eq=shannon_entropy(p_inf, base),
        l1=record.l1_to_equilibrium,
        l1_mean=running_average(record.l1_to_equilibrium, times),
        l1_of_mean=l1_of_mean,
        mean_c=running_average(record.oecm, times),
        c_of_mean=np.atleast_1d(oecm(mean_probs, p_inf, base)),
        bound=theorem1_bound(r, d_eff, f, base),
        bound_asymptotic=asymptotic_bound(r, d_eff, base),
    )

    sq_dev = running_average((mz - mz_eq) ** 2, times)
    meier = 0.5 * np.sqrt(r * f / d_eff)
    reimann = obs.operator_norm**2 / d_eff * f
    cs = np.sqrt(running_average(record.entropy**2, times) * running_average(record.l1_to_equilibrium**2, times))
    res.checks = {
        "theorem1_mean": bool(np.all(res.mean_c <= res.bound + BOUND_SLACK)),
        "theorem1_of_mean": bool(np.all(res.c_of_mean <= res.bound + BOUND_SLACK)),
        "lemma1": bool(np.all((res.mz_mean - mz_eq) ** 2 <= sq_dev + LEMMA_SLACK)),
        "reimann": bool(np.all(sq_dev <= reimann + BOUND_SLACK)),
        "meier": bool(np.all(res.l1_mean <= meier + BOUND_SLACK)),
        "cauchy_schwarz": bool(np.all(res.mean_c <= cs + BOUND_SLACK)),
        "entropy_range": bool(np.all((record.entropy >= 0) & (record.entropy <= math.log(r, base) + BOUND_SLACK))),
        "normalization": bool(np.all(np.abs(probs.sum(axis=1) - 1.0) <= 1e-10)),
    }
    res.asymptotic_checks = {
        "mean_c_below_asymptotic": bool(np.all(res.mean_c <= res.bound_asymptotic)),
        "c_of_mean_below_asymptotic": bool(np.all(res.c_of_mean <= res.bound_asymptotic)),
    }
    return res


def run(cfg: ExperimentConfig, write: bool = True) -> RunSummary:
    problems = validate(cfg)
    if problems:
        raise ConfigError(problems)
    timings = {}
    clock = time.perf_counter()

    spec = SpinChainSpec(cfg.n_sites, cfg.g, cfg.h, cfg.j)
    decomp = diagonalize(build_ising(spec))
    stats = spectral_statistics(decomp)
    timings["diagonalize"] = time.perf_counter() - clock
    obs = magnetization_observable(cfg.n_sites)
    base = _resolve_base(cfg, obs.rank)

    times = TimeGrid.uniform(cfg.t_max, cfg.dt).times
    f, eps = _spectral_factor_series(stats, cfg.epsilon, times)
    states = {}
    for name in (s.lower() for s in cfg.initial_states):
        start = time.perf_counter()
        states[name] = analyse_state(name, decomp, obs, times, f, base)
        timings[f"state_{name}"] = time.perf_counter() - start
        log.info("%s: d_eff=%.4f checks=%s", name, states[name].d_eff, states[name].checks)

    typ_report = None
    if cfg.typicality is not None:
        start = time.perf_counter()
        typ_report = run_typicality(cfg)
        timings["typicality"] = time.perf_counter() - start

    summary = RunSummary(
        config=cfg,
        n_levels=decomp.n_levels,
        rank=obs.rank,
        base=base,
        n_distinct_gaps=int(stats.distinct_gaps.shape[0]),
        gaps_nondegenerate=stats.gaps_nondegenerate,
        epsilon_final=float(eps[-1]),
        n_epsilon_final=gap_count(stats, float(eps[-1])),
        f_final=float(f[-1]),
        times=times,
        epsilon=eps,
        f=f,
        states=states,
        timings=timings,
        typicality=typ_report,
    )
    timings["total"] = time.perf_counter() - clock
    if write:
        write_outputs(summary, output_path(cfg))
    return summary


def run_typicality(cfg: ExperimentConfig):
    typ = cfg.typicality
    spec = SpinChainSpec(typ.n_sites, cfg.g, cfg.h, cfg.j)
    decomp = diagonalize(build_ising(spec))
    obs = magnetization_observable(typ.n_sites)
    epsilon = None if typ.f_mode == "asymptotic" else cfg.epsilon
    return deviation_experiment(
        decomp,
        obs,
        typ.T,
        typ.epsilon_dev,
        typ.n_samples,
        seed=cfg.seed,
        epsilon=epsilon,
        d_eff_convention=typ.d_eff_convention,
    )


# --- output -----------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _write_table(path: Path, header, columns):
    n = len(columns[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(n):
            writer.writerow([fmt(col[i]) for col in columns])


def _series_table(path, first, times, states, specs):
    """``specs`` = [(column prefix, getter)]; one column per state per quantity."""
    header = [first]
    columns = [times]
    for prefix, getter in specs:
        for name, res in states.items():
            header.append(f"{prefix}_{name}")
            value = getter(res)
            columns.append(np.broadcast_to(value, times.shape))
    _write_table(path, header, columns)


def write_outputs(summary: RunSummary, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    t, st = summary.times, summary.states
    _series_table(out / "fig1a.csv", "T", t, st, [("l1_mean", lambda r: r.l1_mean)])
    _series_table(out / "fig1b.csv", "T", t, st, [("l1_of_mean", lambda r: r.l1_of_mean)])
    _series_table(out / "fig2a.csv", "t", t, st, [("Mz", lambda r: r.mz)])
    _series_table(out / "fig2b.csv", "T", t, st, [("Mz_mean", lambda r: r.mz_mean), ("Mz_eq", lambda r: r.mz_eq)])
    _series_table(out / "fig3a.csv", "t", t, st, [("H", lambda r: r.entropy)])
    _series_table(
        out / "fig3b.csv", "T", t, st, [("H_mean", lambda r: r.entropy_mean), ("H_eq", lambda r: r.entropy_eq)]
    )
    _series_table(out / "fig4a.csv", "T", t, st, [("mean_C", lambda r: r.mean_c)])
    _series_table(out / "fig4b.csv", "T", t, st, [("C_of_mean", lambda r: r.c_of_mean)])
    bounds = [("bound", lambda r: r.bound), ("bound_asymptotic", lambda r: r.bound_asymptotic)]
    for fname, first in (("fig5a.csv", ("mean_C", lambda r: r.mean_c)), ("fig5b.csv", ("C_of_mean", lambda r: r.c_of_mean))):
        header = ["T", "epsilon", "f"]
        columns = [t, summary.epsilon, summary.f]
        for prefix, getter in [first] + bounds:
            for name, res in st.items():
                header.append(f"{prefix}_{name}")
                columns.append(np.broadcast_to(getter(res), t.shape))
        _write_table(out / fname, header, columns)
    if summary.typicality is not None:
        write_typicality(summary.typicality, out / "typicality.csv")
    (out / "config.ini").write_text(dump_config(summary.config), encoding="utf-8")
    (out / "timings.json").write_text(json.dumps(summary.timings, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    write_summary(summary, out / "summary.csv")


SUMMARY_HEADER = (
    ["state", "d_eff", "inverse_purity", "rank", "n_levels", "n_distinct_gaps", "gaps_nondegenerate", "base",
     "epsilon_final", "N_epsilon_final", "f_final", "Mz_eq", "H_eq", "mean_C_final", "C_of_mean_final",
     "bound_final", "bound_asymptotic"]
    + list(CHECKS)
    + ["mean_c_below_asymptotic", "c_of_mean_below_asymptotic", "backend"]
)


def write_summary(summary: RunSummary, path: Path):
    rows = []
    for name, res in summary.states.items():
        rows.append(
            [name, res.d_eff, 1.0 / res.purity, summary.rank, summary.n_levels, summary.n_distinct_gaps,
             summary.gaps_nondegenerate, summary.base, summary.epsilon_final, summary.n_epsilon_final,
             summary.f_final, res.mz_eq, res.entropy_eq, res.mean_c[-1], res.c_of_mean[-1], res.bound[-1],
             res.bound_asymptotic]
            + [res.checks[c] for c in CHECKS]
            + [res.asymptotic_checks["mean_c_below_asymptotic"], res.asymptotic_checks["c_of_mean_below_asymptotic"],
               _kernels.BACKEND]
        )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


TYPICALITY_HEADER = [
    "row", "seed_index", "d_eff", "l2_deviation", "exceeds", "jensen_holds",
    "T", "epsilon_dev", "n_samples", "rank", "f", "empirical_frequency", "markov_bound",
    "markov_bound_ensemble_mean", "markov_bound_per_sample_min", "allowance", "vacuous", "violated",
    "mean_sq_deviation", "mean_bound", "mean_bound_holds", "d_eff_convention", "gaps_nondegenerate",
]


def write_typicality(rep, path: Path):
    blank = [""] * (len(TYPICALITY_HEADER) - 6)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TYPICALITY_HEADER)
        for s in rep.samples:
            writer.writerow(
                ["sample", fmt(s.seed_index), fmt(s.d_eff), fmt(s.l2_deviation),
                 fmt(s.l2_deviation >= rep.epsilon_dev), fmt(s.jensen_holds)] + blank
            )
        writer.writerow(
            ["summary", "", fmt(rep.d_eff_mean), "", "", fmt(rep.jensen_holds)]
            + [fmt(x) for x in (
                rep.T, rep.epsilon_dev, rep.n_samples, rep.rank, rep.f_value, rep.empirical_frequency,
                rep.markov_bound, rep.markov_bound_for("ensemble_mean"), rep.markov_bound_for("per_sample_min"),
                rep.allowance, rep.vacuous, rep.violated, rep.mean_sq_deviation, rep.mean_bound,
                rep.mean_bound_holds, rep.d_eff_convention, rep.gaps_nondegenerate,
            )]
        )
