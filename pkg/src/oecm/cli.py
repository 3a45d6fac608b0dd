"""Command-line entry point: ``oecm [--config PATH] [overrides...]``.

Exit status is 0 iff every bound check passes, 1 if any fails, 2 on a
rejected configuration and 3 on an I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import ExperimentConfig, TypicalityConfig, apply_environment, load_config, validate
from .errors import ConfigError
from .experiment import run


def _number_or(keyword):
    def parse(text):
        if text.strip().lower() == keyword:
            return keyword
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number or {keyword!r}, got {text!r}") from None

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="oecm",
        description="Quench a spin-1/2 Ising chain and write equilibration-complexity series and bound checks as CSV.",
    )
    p.add_argument("--config", metavar="PATH", help="INI file with [experiment] and optional [typicality] sections")
    p.add_argument("--n", type=int, dest="n_sites", help="number of sites (default 10)")
    p.add_argument("--states", help="comma-separated subset of up,dw,pm")
    p.add_argument("--tmax", type=float, dest="t_max", help="largest averaging time (default 1000)")
    p.add_argument("--dt", type=float, help="time step (default 0.05)")
    p.add_argument("--epsilon", type=_number_or("auto"), help="gap window for f(eps,T), or 'auto' (default)")
    p.add_argument("--base", type=_number_or("rank"), dest="entropy_base", help="log base, or 'rank' (default)")
    p.add_argument("--out", dest="output_dir", help="output directory (overrides OECM_OUTPUT_DIR)")
    p.add_argument("--seed", type=int, help="seed for Haar sampling (default 0)")
    p.add_argument("--typicality", action="store_true", help="also run the Haar-sample deviation experiment")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    cfg = apply_environment(cfg)
    overrides = {
        key: getattr(args, key)
        for key in ("n_sites", "t_max", "dt", "epsilon", "entropy_base", "output_dir", "seed")
        if getattr(args, key) is not None
    }
    if args.states:
        overrides["initial_states"] = tuple(s.strip().lower() for s in args.states.split(",") if s.strip())
    cfg = replace(cfg, **overrides)
    if args.typicality and cfg.typicality is None:
        cfg = replace(cfg, typicality=TypicalityConfig())
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
    except (OSError, KeyError, ValueError) as exc:
        print(f"oecm: cannot read configuration: {exc}", file=sys.stderr)
        return 2
    problems = validate(cfg)
    if problems:
        for msg in problems:
            print(f"oecm: invalid config: {msg}", file=sys.stderr)
        return 2
    try:
        summary = run(cfg)
    except ConfigError as exc:
        for msg in exc.violations:
            print(f"oecm: invalid config: {msg}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"oecm: cannot write output: {exc}", file=sys.stderr)
        return 3

    for name, res in summary.states.items():
        failed = [c for c, ok in res.checks.items() if not ok]
        status = "ok" if not failed else "FAILED " + ",".join(failed)
        print(f"{name}: d_eff={res.d_eff:.4f} mean_C(T_max)={res.mean_c[-1]:.6g} {status}")
    if summary.typicality is not None:
        rep = summary.typicality
        print(
            f"typicality: frequency={rep.empirical_frequency:.4g} markov_bound={rep.markov_bound:.4g}"
            f"{' (vacuous)' if rep.vacuous else ''} jensen={'ok' if rep.jensen_holds else 'FAILED'}"
        )
    print(f"wrote {cfg.output_dir}")
    return 0 if summary.all_passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
