"""Command-line entry point: ``ernstlab {run,verify,lie-table,reduce-check}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import lie
from .errors import ConfigError, DomainError
from .jets import Taylor3
from .reduction import (
    AlphaAnsatz,
    IntegratingFactor,
    JetPoint,
    determining_system_residuals,
    first_integral_identity_check,
    line_integral_first_integral,
    psi_algebraic_identity,
    psi_values,
)
from .scenario import Scenario, run_scenario, write_outputs

REDUCE_TOLERANCES = {
    "off_shell_identity": 1e-9,
    "determining_system": 1e-12,
    "algebraic_identity": 1e-10,
    "line_integral": 1e-6,
}
PERTURBED_FLOOR = 0.1


def _jet_sample(rng):
    f, g = rng.uniform(0.3, 1.7, 2)
    K = rng.uniform(0.5, 3.0)
    K1, K2 = rng.uniform(-2.0, 2.0, 2)
    return JetPoint(f, g, K, K1, K2)


def reduce_check(seed: int, trials: int) -> dict:
    """Seeded run of the reduction checks; returns a JSON-ready report."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    tags = list(IntegratingFactor)

    off = 0.0
    for _ in range(trials):
        f, g = rng.uniform(0.3, 1.7, 2)
        traj = Taylor3(rng.uniform(0.5, 3.0), *rng.uniform(-2.0, 2.0, 3))
        for tag in tags:
            off = max(off, abs(first_integral_identity_check(traj, f, g, tag)))

    det = 0.0
    for _ in range(trials):
        c1, c2 = rng.uniform(-3.0, 3.0, 2)
        f, g = rng.uniform(0.3, 1.7, 2)
        K = rng.uniform(0.5, 3.0)
        det = max(det, float(np.max(np.abs(determining_system_residuals(AlphaAnsatz.from_constants(c1, c2), f, g, K)))))
    perturbed = float(np.max(np.abs(determining_system_residuals(AlphaAnsatz(((1, 3, -1),)), 1.0, 1.0, 2.0))))

    alg = 0.0
    for _ in range(trials):
        p = _jet_sample(rng)
        psi1, psi2 = psi_values(p)
        scale = abs(psi2 * p.K**4) + abs(psi1 * p.K**2) + (p.s * p.K1) ** 2
        alg = max(alg, abs(psi_algebraic_identity(p)) / max(scale, 1e-300))

    line = 0.0
    for _ in range(trials):
        p, q = _jet_sample(rng), _jet_sample(rng)
        for i, tag in enumerate(tags):
            dp = line_integral_first_integral(p, tag) - psi_values(p)[i]
            dq = line_integral_first_integral(q, tag) - psi_values(q)[i]
            line = max(line, abs(dp - dq))

    values = {
        "off_shell_identity": off,
        "determining_system": det,
        "algebraic_identity": alg,
        "line_integral": line,
    }
    values = {k: float(v) for k, v in values.items()}
    checks = {
        name: {"max_residual": v, "tolerance": REDUCE_TOLERANCES[name], "ok": v <= REDUCE_TOLERANCES[name]}
        for name, v in values.items()
    }
    checks["determining_system_perturbed"] = {
        "min_expected": PERTURBED_FLOOR,
        "max_residual": perturbed,
        "ok": perturbed >= PERTURBED_FLOOR,
    }
    return {"seed": seed, "trials": trials, "checks": checks, "ok": all(c["ok"] for c in checks.values())}


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser():
    ap = argparse.ArgumentParser(prog="ernstlab", description="Hyperbolic Ernst equation toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a scenario and write CSV/JSON outputs")
    run.add_argument("config", type=Path)
    run.add_argument("--out", type=Path, default=Path("."), help="output directory (default: current)")

    ver = sub.add_parser("verify", help="evaluate a scenario and check residuals only")
    ver.add_argument("config", type=Path)
    ver.add_argument("--tol", type=float, default=None, help="override the scenario tolerance")

    tab = sub.add_parser("lie-table", help="print the commutator table of X1..X5")
    tab.add_argument("--json", action="store_true")

    red = sub.add_parser("reduce-check", help="seeded checks of the order-reduction machinery")
    red.add_argument("--seed", type=int, default=0)
    red.add_argument("--trials", type=_positive_int, default=50)
    return ap


def _load(path):
    try:
        return Scenario.load(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


def _dump(obj):
    print(json.dumps(obj, indent=2))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lie-table":
            print(lie.table_json() if args.json else lie.render_table())
            return 0

        if args.command == "reduce-check":
            report = reduce_check(args.seed, args.trials)
            _dump(report)
            failed = [name for name, c in report["checks"].items() if not c["ok"]]
            for name in failed:
                print(f"ernstlab: check failed: {name}", file=sys.stderr)
            return 1 if failed else 0

        sc = _load(args.config)
        if args.command == "verify" and args.tol is not None:
            sc = Scenario.from_dict({**sc.to_dict(), "tolerance": args.tol})
        result = run_scenario(sc)
        if args.command == "run":
            for p in write_outputs(result, args.out, args.config.stem):
                print(f"wrote {p}", file=sys.stderr)
        _dump(result.summary())
        if not result.ok:
            print("ernstlab: residual above tolerance", file=sys.stderr)
            return 1
        return 0
    except (ConfigError, DomainError) as exc:
        print(f"ernstlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
