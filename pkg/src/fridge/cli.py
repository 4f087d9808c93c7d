"""``fridge`` command-line interface.

Exit codes: 0 success, 1 config/usage error, 2 verification failure,
3 numerical divergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import dynamics, steady, thermo
from .errors import DegenerateRegimeError, DomainError, FridgeError, IntegrationDivergedError
from .model import PARAM_KEYS, FridgeParams
from .qops import trace_distance

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_DIVERGED = 3

SWEEP_HEADER = ["x", "gamma", "Qc", "Qr", "Qh", "eta", "eta_carnot", "T1S", "cooling", "margin"]
DIGITS = 12


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _key_line(text: str, key: str) -> int | None:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def load_config(path: str | Path) -> FridgeParams:
    """Read a flat JSON parameter object; errors carry the file and line."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: config must be a JSON object")
    for key in data:
        if key not in PARAM_KEYS:
            raise ConfigError(f"{path}:{_key_line(text, key)}: unknown key {key!r} (allowed: {', '.join(PARAM_KEYS)})")
    missing = [k for k in PARAM_KEYS if k not in data]
    if missing:
        raise ConfigError(f"{path}: missing key(s): {', '.join(missing)}")
    try:
        return FridgeParams.from_mapping(data)
    except DomainError as exc:
        bad = next((k for k in PARAM_KEYS if str(exc).startswith(k + " ")), None)
        line = _key_line(text, bad) if bad else None
        where = f"{path}:{line}" if line else str(path)
        raise ConfigError(f"{where}: {exc}") from exc


def _fmt(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def _carnot_or_none(params: FridgeParams):
    try:
        return thermo.carnot_efficiency(*params.temperatures)
    except DomainError:
        return None


def steady_report(params: FridgeParams) -> dict:
    coeffs = steady.steady_coefficients(params)
    rho = steady.steady_state(params)
    residual = float(np.max(np.abs(dynamics.master_rhs(rho, params).entries)))
    reduced = {}
    temps = {}
    for i in (1, 2, 3):
        r = steady.reduced_steady_state(params, i)
        reduced[str(i)] = {"ground": float(r.entries[0, 0].real), "excited": float(r.entries[1, 1].real)}
        temps[f"T{i}S"] = _finite_or_none(steady.effective_temperature(r, params.energies[i - 1]))
    cur = thermo.heat_currents(params)
    try:
        cooling, margin = thermo.cooling_condition(params)
    except DegenerateRegimeError:
        cooling, margin = False, None
    report = {
        "params": params.to_dict(),
        "E2": params.E2,
        "weak_coupling_ok": params.weak_coupling_ok,
        "coefficients": coeffs.__dict__.copy(),
        "steady_state": {
            "real": rho.entries.real.tolist(),
            "imag": rho.entries.imag.tolist(),
        },
        "reduced_states": reduced,
        "effective_temperatures": temps,
        "heat_currents": {"Qc": cur.Qc, "Qr": cur.Qr, "Qh": cur.Qh},
        "cooling": cooling,
        "margin": margin,
        "efficiency": thermo.efficiency(params) if cooling else None,
        "eta_carnot": _carnot_or_none(params),
        "entropy_production_rate": thermo.entropy_production_rate(params),
        "residual": residual,
        "residual_over_q": residual / params.q,
    }
    if not cooling:
        report["notice"] = "not a refrigerator for these parameters: efficiency undefined"
    return report


def sweep_rows(params: FridgeParams, vary: str, start: float, stop: float, steps: int) -> list[list[str]]:
    if vary not in PARAM_KEYS:
        raise ConfigError(f"unknown sweep variable {vary!r} (choose from {', '.join(PARAM_KEYS)})")
    if steps < 2:
        raise ConfigError(f"--steps must be >= 2, got {steps}")
    if not (math.isfinite(start) and math.isfinite(stop)) or start == stop:
        raise ConfigError(f"sweep range [{start}, {stop}] is empty")
    lo, hi = sorted((start, stop))
    rows = []
    for x in np.linspace(lo, hi, steps):
        x = float(x)
        try:
            p = params.replace(**{vary: x})
        except DomainError as exc:
            raise ConfigError(f"sweep point {vary}={x!r}: {exc}") from exc
        cur = thermo.heat_currents(p)
        try:
            cooling, margin = thermo.cooling_condition(p)
        except DegenerateRegimeError:
            cooling, margin = False, None
        carnot = _carnot_or_none(p)
        rows.append([
            _fmt(x),
            _fmt(steady.gamma(p)),
            _fmt(cur.Qc),
            _fmt(cur.Qr),
            _fmt(cur.Qh),
            _fmt(thermo.efficiency(p)) if cooling else "",
            "" if carnot is None else _fmt(carnot),
            _fmt(steady.stationary_temperature(p, 1)),
            "true" if cooling else "false",
            "" if margin is None else _fmt(margin),
        ])
    return rows


def _write_csv(path: str, header: list[str], rows: list[list[str]]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_steady(args) -> int:
    params = load_config(args.config)
    text = json.dumps(steady_report(params), indent=2) + "\n"
    if args.json_out:
        Path(args.json_out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_evolve(args) -> int:
    params = load_config(args.config)
    t_end = args.t_end
    if not t_end > 0:
        raise ConfigError(f"--t-end must be > 0, got {t_end}")
    if args.sample_every is not None and not args.sample_every > 0:
        raise ConfigError(f"--sample-every must be > 0, got {args.sample_every}")
    target = steady.steady_state(params)
    rho0 = target if args.initial == "steady" else dynamics.thermal_product(params)
    try:
        traj = dynamics.evolve(rho0, params, t_end, args.sample_every)
    except IntegrationDivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    with open(args.out, "w", newline="") as fh:
        traj.write_csv(fh, DIGITS)
    print(f"final_trace_distance {_fmt(trace_distance(traj.final, target))}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    params = load_config(args.config)
    rows = sweep_rows(params, args.vary, args.start, args.stop, args.steps)
    _write_csv(args.out, SWEEP_HEADER, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verification

    params = load_config(args.config)
    if args.samples < 1:
        raise ConfigError(f"--samples must be >= 1, got {args.samples}")
    if not 0 <= args.seed < 2**64:
        raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
    reports = run_verification(args.samples, args.seed, extra=[params])
    failed = [(i, r) for i, r in enumerate(reports) if not r.passed]
    print(f"verify: seed={args.seed} samples={args.samples} (+ config) generator=PCG64")
    print(
        "max oracle distance {}  max residual/q {}  max first-law defect {}  min entropy production {}".format(
            _fmt(max(r.oracle_distance for r in reports)),
            _fmt(max(r.residual / r.params.q for r in reports)),
            _fmt(max(r.first_law for r in reports)),
            _fmt(min(r.entropy_production for r in reports)),
        )
    )
    if failed:
        i, rep = failed[0]
        print(f"FAIL: {len(failed)} of {len(reports)} sample(s); first failure is sample {i}")
        for msg in rep.failures:
            print(f"  {msg}")
        print("  params " + json.dumps(rep.params.to_dict()))
        return EXIT_VERIFY
    print(f"PASS: {len(reports)} sample(s)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fridge", description="Three-qubit self-contained refrigerator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("steady", help="closed-form stationary state and thermodynamics report (JSON)")
    p.add_argument("--config", required=True)
    p.add_argument("--json-out")
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("evolve", help="integrate the master equation and write a trajectory CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--sample-every", type=float)
    p.add_argument("--initial", choices=("thermal", "steady"), default="thermal",
                   help="initial state: thermal product (default) or the closed-form steady state")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="tabulate currents and efficiencies over one parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--vary", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-check closed forms against numerical oracles")
    p.add_argument("--config", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FridgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
