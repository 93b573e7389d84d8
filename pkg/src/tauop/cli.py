"""Command-line driver: ``tauop {verify,scaling,counterexample,norms,convert}``."""
from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from . import experiments as ex
from .grid import twiddle_fault


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--grid-n", type=int, help="samples per axis (power of two)")
    p.add_argument("--grid-l", type=float, help="window length L")
    p.add_argument("--tau", help="comma-separated tau values")
    p.add_argument("--seed", type=int, help="Philox key for random draws")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--shifted-grid", action="store_true", help="half-step grid without a sample at 0")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tauop", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="run the identity suite")
    _common(v)
    v.add_argument("--check", action="append", help="run only this check (repeatable)")
    v.add_argument("--twiddle-fault", type=float, default=0.0, help=argparse.SUPPRESS)
    for name, text in (
        ("scaling", "operator-norm lower bounds against alpha(tau)"),
        ("counterexample", "endpoint unboundedness experiment"),
        ("norms", "Wiener and modulation norms of tau-Wigner distributions"),
    ):
        _common(sub.add_parser(name, help=text))
    c = sub.add_parser("convert", help="convert a symbol between quantizations")
    _common(c)
    c.add_argument("--from-tau", type=float, required=True)
    c.add_argument("--to-tau", type=float, required=True)
    return ap


def load_config(args) -> ex.ExperimentConfig:
    cfg = ex.ExperimentConfig.from_file(args.config) if args.config else ex.ExperimentConfig()
    over = {}
    if args.grid_n is not None:
        over["grid.n"] = args.grid_n
    if args.grid_l is not None:
        over["grid.l"] = args.grid_l
    if args.tau is not None:
        key = "scaling.tau_list" if args.cmd == "scaling" else "tau_list"
        over[key] = args.tau
    if args.seed is not None:
        over["probes.seed"] = args.seed
    if args.shifted_grid:
        over["grid.shifted"] = "true"
    return ex.ExperimentConfig.from_mapping(over, cfg) if over else cfg


def _report(checks: dict, tol: dict) -> int:
    bad = 0
    for name, (value, key, ok) in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name} = {ex.format_value(value)} (tol {ex.format_value(tol[key])})")
        bad += not ok
    return 1 if bad else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    tol = cfg.tolerances

    if args.cmd == "verify":
        fault = twiddle_fault(args.twiddle_fault) if args.twiddle_fault else contextlib.nullcontext()
        with fault:
            summary = ex.cmd_verify(cfg, out, args.check)
        for c in summary.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name} = {ex.format_value(c.value)}")
        fails = summary.failures()
        if fails:
            print("failed: " + ", ".join(c.name for c in fails), file=sys.stderr)
        return 0 if not fails else 1

    if args.cmd == "scaling":
        header, rows = ex.cmd_scaling(cfg)
        ex.write_csv(out / "scaling.csv", header, rows)
        s = ex.scaling_summary(rows)
        checks = {
            "ratio_spread": (s["ratio_spread"], "scaling_spread", s["ratio_spread"] < tol["scaling_spread"]),
            "norm_lower_spread": (s["norm_lower_spread"], "l2_uniform_spread", s["norm_lower_spread"] < tol["l2_uniform_spread"]),
        }
        ex.write_summary(out / "scaling_summary.txt", cfg, {**s, "passed": int(all(c[2] for c in checks.values()))})
        return _report(checks, tol)

    if args.cmd == "counterexample":
        header, rows = ex.cmd_counterexample(cfg)
        ex.write_csv(out / "counterexample.csv", header, rows)
        s = ex.counterexample_summary(rows)
        s["closed_form_interval_err"] = ex.counterexample_closed_form_error(cfg)
        checks = {
            "slope": (s["slope"], "counterexample_slope", abs(s["slope"] - 0.5) <= tol["counterexample_slope"]),
            "closed_form_interval_err": (
                s["closed_form_interval_err"],
                "counterexample_closed_form",
                s["closed_form_interval_err"] < tol["counterexample_closed_form"],
            ),
        }
        ex.write_summary(out / "counterexample_summary.txt", cfg, {**s, "passed": int(all(c[2] for c in checks.values()))})
        return _report(checks, tol)

    if args.cmd == "norms":
        header, rows = ex.cmd_norms(cfg)
        ex.write_csv(out / "norms.csv", header, rows)
        s = ex.norms_summary(rows)
        checks = {
            "ratio_fl2_l2_spread": (s["ratio_fl2_l2_spread"], "l2_uniform_spread", s["ratio_fl2_l2_spread"] < tol["l2_uniform_spread"]),
        }
        ex.write_summary(out / "norms_summary.txt", cfg, {**s, "passed": int(all(c[2] for c in checks.values()))})
        return _report(checks, tol)

    if args.cmd == "convert":
        header, rows = ex.cmd_convert(cfg, args.from_tau, args.to_tau)
        ex.write_csv(out / "convert.csv", header, rows)
        ex.write_summary(out / "convert_summary.txt", cfg, {"from_tau": args.from_tau, "to_tau": args.to_tau, "symbol": cfg.symbol})
        print(f"wrote {out / 'convert.csv'} ({len(rows)} rows)")
        return 0
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
