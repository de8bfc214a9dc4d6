"""Command-line entry point for every reproduction path.

Subcommands: ``payoff``, ``sweep``, ``nash``, ``scan-pure``, ``nstage``,
``mc``, ``serve``.  Angles are accepted as decimal radians or as fractions
of pi ("pi/4", "3pi/8", "0.5pi").  All numeric flags are echoed back in the
report for provenance; with a fixed seed the stdout bytes are identical
across runs (the version banner goes to stderr and can be silenced with
``--no-banner``).

Exit codes: 0 success, 1 failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import asdict

from . import __version__
from .equilibrium import (
    StrategyProfile,
    no_pure_equilibrium_scan,
    sweep_payoff,
    verify_nash,
)
from .errors import QmontyError, ScanFailureError
from .game import AliceMeasurementStrategy, BobStrategy, expected_payoff
from .montecarlo import DEFAULT_CHUNKS, compare_with_analytic
from .nstage import NStageConfig, optimal_classical_policy, quantum_nstage_equilibrium

DEFAULT_SEED = 1729

_ANGLE_PATTERN = re.compile(r"^\s*([0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$", re.IGNORECASE)


def parse_angle(text: str) -> float:
    """Radians from a decimal literal or a pi fraction such as 'pi/4'."""
    match = _ANGLE_PATTERN.match(text)
    if match:
        numerator = float(match.group(1)) if match.group(1) else 1.0
        denominator = float(match.group(2)) if match.group(2) else 1.0
        if denominator == 0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {text!r}")
        return numerator * math.pi / denominator
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from exc


def parse_profile(text: str) -> StrategyProfile:
    """Profile literal 'ALPHA0,ALPHA1,SPEC' with SPEC one of
    stick | switch | mix:ETA | quantum:BETA | a bare eta literal."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"profile must be 'alpha0,alpha1,strategy', got {text!r}")
    alpha0, alpha1 = parse_angle(parts[0]), parse_angle(parts[1])
    spec = parts[2]
    try:
        if spec == "stick":
            bob = BobStrategy.stick()
        elif spec == "switch":
            bob = BobStrategy.switch()
        elif spec.startswith("mix:"):
            bob = BobStrategy.mix(float(spec[4:]))
        elif spec.startswith("quantum:"):
            bob = BobStrategy.quantum(parse_angle(spec[8:]))
        else:
            bob = BobStrategy.mix(float(spec))
        return StrategyProfile(AliceMeasurementStrategy(alpha0, alpha1), bob)
    except (QmontyError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_grid(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must look like A0xA1xN, got {text!r}")
    try:
        a0, a1, n = (int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must hold integers, got {text!r}") from exc
    return a0, a1, n


def resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get("QMONTY_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"QMONTY_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmonty",
        description="Quantum Monty Hall: payoffs, equilibria, n-stage analysis, "
                    "Monte Carlo checks, and the interactive play service.")
    parser.add_argument("--no-banner", action="store_true",
                        help="suppress the version banner on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_format(p, choices=("table", "json"), default="table"):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("payoff", help="exact payoff of one strategy pair")
    p.add_argument("--alpha0", type=parse_angle, required=True)
    p.add_argument("--alpha1", type=parse_angle, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--eta", type=float)
    group.add_argument("--beta", type=parse_angle)
    add_output_format(p)

    p = sub.add_parser("sweep", help="payoff table over a parameter grid")
    p.add_argument("--grid", type=parse_grid, required=True,
                   help="A0xA1xN step counts; third axis is eta (or beta with --quantum-bob)")
    p.add_argument("--quantum-bob", action="store_true")
    p.add_argument("--out", metavar="FILE", help="write to a file instead of stdout")
    add_output_format(p, choices=("csv", "json"), default="csv")

    p = sub.add_parser("nash", help="verify a profile for Nash equilibrium")
    p.add_argument("--alpha0", type=parse_angle, default=math.pi / 4)
    p.add_argument("--alpha1", type=parse_angle, default=math.pi / 4)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--expect-nash", action="store_true",
                   help="exit 1 when the profile is not an equilibrium")
    add_output_format(p)

    p = sub.add_parser("scan-pure", help="certify that no deterministic profile is stable")
    p.add_argument("--step", type=parse_angle, default=math.pi / 200)
    add_output_format(p)

    p = sub.add_parser("nstage", help="n-box analysis: classical optimum, quantum last step")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--quantum", action="store_true")
    p.add_argument("--tie-break", choices=("uniform", "adversarial"), default="uniform")
    p.add_argument("--tol", type=float, default=1e-9)
    add_output_format(p)

    p = sub.add_parser("mc", help="Monte Carlo check of a profile against the closed form")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--chunks", type=int, default=DEFAULT_CHUNKS)
    p.add_argument("--profile", type=parse_profile, default=None,
                   help="alpha0,alpha1,strategy (default: pi/4,pi/4,mix:0.5)")
    add_output_format(p)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def emit(params: dict, values: dict, fmt: str, stream) -> None:
    """Write a report with its provenance header."""
    if fmt == "json":
        stream.write(json.dumps({"params": params, **values}, sort_keys=True) + "\n")
        return
    for key, value in params.items():
        stream.write(f"# {key}={value!r}\n")
    for key, value in values.items():
        stream.write(f"{key}: {value!r}\n" if isinstance(value, float)
                     else f"{key}: {value}\n")


def cmd_payoff(args, out) -> int:
    alice = AliceMeasurementStrategy(args.alpha0, args.alpha1)
    bob = BobStrategy.mix(args.eta) if args.eta is not None else BobStrategy.quantum(args.beta)
    report = expected_payoff(alice, bob)
    params = {"alpha0": args.alpha0, "alpha1": args.alpha1}
    if args.eta is not None:
        params["eta"] = args.eta
    else:
        params["beta"] = bob.beta
    emit(params, {"p_win": report.p_win, "gain": report.gain,
                  "method": report.method, "stderr": report.stderr}, args.format, out)
    return 0


def cmd_sweep(args, out) -> int:
    a0, a1, n = args.grid
    if args.quantum_bob:
        table = sweep_payoff(a0, a1, beta_steps=n)
    else:
        table = sweep_payoff(a0, a1, eta_steps=n)

    def write(stream):
        if args.format == "csv":
            table.write_csv(stream)
        else:
            stream.write(json.dumps(table.to_records()) + "\n")

    if args.out:
        with open(args.out, "w") as handle:
            write(handle)
        print(f"# wrote {len(table.rows)} rows to {args.out}", file=sys.stderr)
    else:
        write(out)
    return 0


def cmd_nash(args, out) -> int:
    profile = StrategyProfile(AliceMeasurementStrategy(args.alpha0, args.alpha1),
                              BobStrategy.mix(args.eta))
    report = verify_nash(profile, tol=args.tol)
    bob_dev, bob_value = report.bob_best_dev
    emit(
        {"alpha0": args.alpha0, "alpha1": args.alpha1, "eta": args.eta, "tol": args.tol},
        {
            "is_nash": report.is_nash,
            "value": report.value,
            "gain": 2.0 * report.value - 1.0,
            "exploitability": report.exploitability,
            "alice_best_dev": f"alpha0={report.alice_best_dev[0]!r} "
                              f"alpha1={report.alice_best_dev[1]!r} "
                              f"value={report.alice_best_dev[2]!r}",
            "bob_best_dev": f"{bob_dev.describe()} value={bob_value!r}",
        },
        args.format, out)
    if args.expect_nash and not report.is_nash:
        return 1
    return 0


def cmd_scan_pure(args, out) -> int:
    try:
        cert = no_pure_equilibrium_scan(args.step)
    except ScanFailureError as exc:
        print(f"scan failure: {exc}", file=sys.stderr)
        return 1
    emit({"step": args.step}, asdict(cert), args.format, out)
    return 0


def cmd_nstage(args, out) -> int:
    if args.n < 3:
        print("nstage: --n must be at least 3", file=sys.stderr)
        return 2
    run_brute = args.brute_force or not args.quantum
    run_quantum = args.quantum or not args.brute_force
    config = NStageConfig(args.n, args.tie_break)
    params = {"n": args.n, "tie_break": args.tie_break, "tol": args.tol}
    values: dict = {}
    if run_brute:
        policy, value = optimal_classical_policy(config)
        values.update({
            "policy": str(policy),
            "exact_value": f"{value.numerator}/{value.denominator}",
            "float_value": float(value),
        })
    if run_quantum:
        report = quantum_nstage_equilibrium(config, tol=args.tol)
        values.update({
            "quantum_is_nash": report.is_nash,
            "quantum_value": report.value,
            "quantum_gain": 2.0 * report.value - 1.0,
            "quantum_exploitability": report.exploitability,
        })
    emit(params, values, args.format, out)
    return 0


def cmd_mc(args, out) -> int:
    seed = resolve_seed(args.seed)
    profile = args.profile
    if profile is None:
        profile = StrategyProfile(
            AliceMeasurementStrategy(math.pi / 4, math.pi / 4), BobStrategy.mix(0.5))
    report = compare_with_analytic(profile, args.trials, seed, chunks=args.chunks)
    emit(
        {"alpha0": profile.alice.alpha0, "alpha1": profile.alice.alpha1,
         "bob": profile.bob.describe(), "trials": args.trials, "seed": seed,
         "chunks": args.chunks},
        {"p_hat": report.p_hat, "p_exact": report.p_exact, "stderr": report.stderr,
         "z_score": report.z_score, "pass": report.passed, "low_power": report.low_power},
        args.format, out)
    return 0 if report.passed else 1


def cmd_serve(args, out) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.no_banner:
        print(f"qmonty {__version__}", file=sys.stderr)
    handlers = {
        "payoff": cmd_payoff,
        "sweep": cmd_sweep,
        "nash": cmd_nash,
        "scan-pure": cmd_scan_pure,
        "nstage": cmd_nstage,
        "mc": cmd_mc,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args, sys.stdout)
    except QmontyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
