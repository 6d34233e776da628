"""Command-line surface: bound tables, verification campaigns, construction
certificates, optimization runs, and the envelope curve.

Exit codes: 0 success, 1 a mathematical claim failed numerically
(inequality counterexample, certificate violation, sandwich violation),
2 usage error.  Every invocation persists a RunReport JSON under --out
(default ./runs), named command + timestamp + seed; repeated invocations
produce identical content except for the timestamps.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import backend, bounds, fejer
from .constructions import CertificateError, certify, is_prime
from .core import (
    MomentSummary,
    WeightedSystem,
    abs_sq_over_range,
    moments,
    pair_spectrum,
)
from .optimizer import OptimizerConfig, minimize

SCHEMA_VERSION = 1

_SEED_MASK = (1 << 64) - 1

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _fmt(x) -> str:
    """CSV number format: '.' decimal, 9 significant digits, locale-free."""
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.9g}"


@dataclass(frozen=True)
class RunReport:
    """Persisted record of one invocation; round-trips losslessly through JSON."""

    schema_version: int
    command: str
    inputs: dict
    outputs: dict
    timestamp: str
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": self.schema_version,
                "command": self.command,
                "inputs": self.inputs,
                "outputs": self.outputs,
                "timestamp": self.timestamp,
                "seed": self.seed,
            },
            sort_keys=True,
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        return cls(
            int(d["schema_version"]),
            d["command"],
            d["inputs"],
            d["outputs"],
            d["timestamp"],
            int(d["seed"]),
        )


def _make_report(command: str, inputs: dict, outputs: dict, seed: int) -> RunReport:
    ts = datetime.now(timezone.utc).isoformat()
    return RunReport(SCHEMA_VERSION, command, inputs, outputs, ts, seed)


def _persist(report: RunReport, out_dir: str) -> Path:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    stamp = report.timestamp.replace(":", "").replace("+", "Z").replace(".", "_")
    path = d / f"{report.command}-{stamp}-seed{report.seed}.json"
    path.write_text(report.to_json())
    return path


# ---------------------------------------------------------------- bounds ----


def _bound_rows(n: int | None, m: int | None, j: int | None,
                alpha: float | None, want_c3: bool, c: float) -> list[dict]:
    """One row per formula for the requested inputs, values sqrt-converted."""
    rows: list[bounds.BoundResult] = []
    if alpha is not None:
        phi_val = bounds.phi(alpha)
        rows.append(
            bounds.BoundResult(
                phi_val, True, bounds.Formula.Phi, True, (), {"alpha": alpha},
                None, notes="per-sqrt(n) units, asymptotic lower envelope",
            )
        )
        rows.append(
            bounds.BoundResult(
                bounds.ceil_envelope(alpha), False, bounds.Formula.CeilEnvelope,
                True, (), {"alpha": alpha}, None,
                notes="per-sqrt(n) units, asymptotic upper envelope (o(1) not quantified)",
            )
        )
    elif want_c3:
        lo, hi = bounds.corollary3(n)
        rows += [lo, hi]
    else:
        if j is not None:
            m = n * n + j
        i, ii = bounds.corollary1(n, m)
        t3i0, t3i1 = bounds.theorem3_bounds(bounds.pure_moments(n), m)
        rows += [i, ii, t3i0, t3i1]
        if m >= n * n:
            rows.append(bounds.theorem4(n, m - n * n))
        else:
            rows.append(
                bounds.BoundResult(
                    math.nan, False, bounds.Formula.T4, False,
                    (("m >= n^2", False),), {"n": n, "m": m}, m,
                )
            )
        c2 = bounds.corollary2(n)
        if m < n * n:  # its range 1..n^2 does not fit inside 1..m
            c2 = bounds.BoundResult(
                c2.value, False, bounds.Formula.C2, False,
                (("range 1..n^2 within 1..m", False),), c2.inputs, c2.range_top,
            )
        rows.append(c2)
        lo, hi = bounds.corollary3(n)
        if m < n * n + n - 1:
            lo = bounds.BoundResult(
                lo.value, False, bounds.Formula.C3lower, False,
                (("range fits", False),), lo.inputs, lo.range_top,
            )
            hi = bounds.BoundResult(
                hi.value, False, bounds.Formula.C3upper, False,
                hi.conditions + (("range fits", False),), hi.inputs, hi.range_top,
            )
        rows += [lo, hi]
        rows += bounds.classical_bounds(n, m, c)
        best = bounds.best_lower_bound(n, m)
        rows.append(best)
    return [r.to_dict() for r in rows]


def _print_rows_csv(rows: list[dict], out) -> None:
    print("formula,applicable,value,range_top,notes", file=out)
    for r in rows:
        print(
            f"{r['formula']},{str(r['applicable']).lower()},"
            f"{_fmt(r['reported_value'])},{r['range_top'] if r['range_top'] is not None else ''},"
            f"\"{r['notes']}\"",
            file=out,
        )


def cmd_bounds(args) -> int:
    if args.alpha is not None:
        if args.alpha < 1.0:
            print(f"error: --alpha must be >= 1, got {args.alpha}", file=sys.stderr)
            return EXIT_USAGE
    elif args.n is None:
        print("error: need --n (with --m or --j or --corollary3) or --alpha", file=sys.stderr)
        return EXIT_USAGE
    elif args.n < 1:
        print(f"error: --n must be >= 1, got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    elif not args.corollary3:
        if args.m is None and args.j is None:
            print("error: need --m or --j alongside --n", file=sys.stderr)
            return EXIT_USAGE
        if args.m is not None and args.m < 1:
            print(f"error: --m must be >= 1, got {args.m}", file=sys.stderr)
            return EXIT_USAGE
        if args.j is not None and args.j < 0:
            print(f"error: --j must be >= 0, got {args.j}", file=sys.stderr)
            return EXIT_USAGE
    rows = _bound_rows(args.n, args.m, args.j, args.alpha, args.corollary3, args.c)
    inputs = {k: getattr(args, k) for k in ("n", "m", "j", "alpha", "corollary3", "c")}
    report = _make_report("bounds", inputs, {"rows": rows}, args.seed)
    if args.format == "json":
        print(report.to_json())
    else:
        _print_rows_csv(rows, sys.stdout)
    _persist(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- verify ----


def _check(holds: bool, name: str, failures: list, context: dict) -> None:
    if not holds:
        failures.append({"check": name, **context})


def run_verify_campaign(trials: int, n_max: int, m_max: int, seed: int) -> dict:
    """Random-system campaign over the one-sided inequalities and moment bounds.

    Each trial draws a weighted system, checks the second-moment and
    positive-part inequalities on its pair spectrum (with the cap M set to
    the observed max |h(nu)|), checks both moment bounds against the actual
    max |g(nu)|^2, and repeats the direct checks on a symmetrized,
    real-valued system.  Returns a summary dict with the first
    counterexample, if any.
    """
    failures: list[dict] = []
    checks_run = 0
    for trial in range(trials):
        rng = np.random.Generator(np.random.Philox(key=[seed & _SEED_MASK, trial]))
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        system = WeightedSystem(rng.uniform(0.05, 3.0, n), rng.random(n))
        mom = moments(system)
        h = pair_spectrum(system)
        context = {
            "trial": trial,
            "n": n,
            "m": m,
            "weights": system.weights.tolist(),
            "angles": system.angles.tolist(),
        }
        vals = h.values(m)
        lhs, rhs, ok = fejer.lemma1_check(h, mom.A3, mom.B3q, m)
        _check(ok, "lemma1(pair spectrum)", failures, {**context, "lhs": lhs, "rhs": rhs})
        lhs, rhs, ok = fejer.partial_sum_check(h, mom.A3, m)
        _check(ok, "partial_sum(pair spectrum)", failures, {**context, "lhs": lhs, "rhs": rhs})
        checks_run += 2
        cap = float(np.abs(vals).max()) if h.n_terms else 0.0
        gplus_max = max(float(vals.max()), 0.0) if h.n_terms else 0.0
        if cap > 0.0:
            lhs, rhs, ok = fejer.lemma2_check(h, mom.A3, mom.B3q, cap, m)
            _check(ok, "lemma2(pair spectrum)", failures, {**context, "lhs": lhs, "rhs": rhs})
            t1 = fejer.theorem1_bound(mom.A3, mom.B3q, cap, m)
            _check(
                gplus_max >= t1 - 1e-9 * (abs(t1) + 1.0),
                "theorem1(pair spectrum)", failures,
                {**context, "bound": t1, "observed": gplus_max},
            )
            t2 = fejer.theorem2_bound(mom.A3, mom.B3q, cap, m)
            d = mom.B3q * (m + 1) - mom.A3**2 - m * cap * cap
            want = bounds.Formula.T2a if d >= 0 else bounds.Formula.T2b
            _check(t2.formula == want, "theorem2 case selection", failures, context)
            if t2.applicable:
                _check(
                    gplus_max >= t2.value - 1e-9 * (abs(t2.value) + 1.0),
                    "theorem2(pair spectrum)", failures,
                    {**context, "bound": t2.value, "observed": gplus_max},
                )
            checks_run += 4
        observed_sq = float(abs_sq_over_range(system, m).max())
        i0, i1 = bounds.theorem3_bounds(mom, m)
        _check(
            observed_sq >= i0.value - 1e-9 * (abs(i0.value) + 1.0),
            "theorem3.i0", failures,
            {**context, "bound": i0.value, "observed": observed_sq},
        )
        checks_run += 1
        if i1.applicable:
            _check(
                observed_sq >= i1.value - 1e-9 * (abs(i1.value) + 1.0),
                "theorem3.i1", failures,
                {**context, "bound": i1.value, "observed": observed_sq},
            )
            checks_run += 1

        # symmetrized real-valued system: direct use of the one-sided machinery
        ns = int(rng.integers(1, 5))
        bs = rng.uniform(0.05, 2.0, ns)
        ts = rng.random(ns)
        sym = WeightedSystem(
            np.concatenate([bs, bs]), np.concatenate([ts, np.mod(-ts, 1.0)])
        )
        from .core import RealExponentialSum

        g = RealExponentialSum.from_weighted(sym)
        a_sym = float(sym.weights.sum())
        b_sym = float((sym.weights**2).sum())
        gvals = g.values(m)
        lhs, rhs, ok = fejer.lemma1_check(g, a_sym, b_sym, m)
        _check(ok, "lemma1(symmetric)", failures, {**context, "lhs": lhs, "rhs": rhs})
        cap = float(np.abs(gvals).max())
        if cap > 0.0:
            lhs, rhs, ok = fejer.lemma2_check(g, a_sym, b_sym, cap, m)
            _check(ok, "lemma2(symmetric)", failures, {**context, "lhs": lhs, "rhs": rhs})
            checks_run += 1
        lhs, rhs, ok = fejer.partial_sum_check(g, a_sym, m)
        _check(ok, "partial_sum(symmetric)", failures, {**context, "lhs": lhs, "rhs": rhs})
        checks_run += 2
        if failures:
            break
    return {
        "trials_requested": trials,
        "trials_run": trial + 1 if trials else 0,
        "checks_run": checks_run,
        "failures": len(failures),
        "first_counterexample": failures[0] if failures else None,
    }


def cmd_verify(args) -> int:
    if args.trials < 1 or args.n_max < 1 or args.m_max < 1:
        print("error: --trials, --n-max and --m-max must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    summary = run_verify_campaign(args.trials, args.n_max, args.m_max, args.seed)
    report = _make_report(
        "verify",
        {"trials": args.trials, "n_max": args.n_max, "m_max": args.m_max},
        summary,
        args.seed,
    )
    if args.format == "json":
        print(report.to_json())
    else:
        print(f"{summary['trials_run'] - summary['failures']}/{summary['trials_run']} pass "
              f"({summary['checks_run']} checks)")
    _persist(report, args.out)
    if summary["failures"]:
        print(
            "counterexample:\n" + json.dumps(summary["first_counterexample"], indent=2),
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    return EXIT_OK


# ------------------------------------------------------------- construct ----


def cmd_construct(args) -> int:
    if not is_prime(args.p):
        print(f"error: --p must be prime, got {args.p}", file=sys.stderr)
        return EXIT_USAGE
    if args.p < 3:
        print("error: need --p >= 3", file=sys.stderr)
        return EXIT_USAGE
    try:
        cert = certify(args.p, workers=args.workers)
    except CertificateError as exc:
        print(f"certificate violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    report = _make_report(
        "construct", {"p": args.p, "workers": args.workers}, cert.to_dict(), args.seed
    )
    if args.format == "json":
        print(report.to_json())
    else:
        print(f"p = {cert.p}: observed max {_fmt(cert.observed_max)} over "
              f"nu = 1..{cert.range_top}, theoretical {_fmt(cert.theoretical_max)}, "
              f"max deviation {_fmt(cert.max_deviation)}")
        print("classes: " + ", ".join(f"{k}={v}" for k, v in cert.per_nu_class.items()))
    _persist(report, args.out)
    return EXIT_OK


# -------------------------------------------------------------- optimize ----


def cmd_optimize(args) -> int:
    try:
        config = OptimizerConfig(
            n=args.n,
            m=args.m,
            restarts=args.restarts,
            iterations=args.iters,
            seed=args.seed,
            workers=args.workers,
            warm_starts=not args.no_warm_starts,
            check_gradients=args.check_gradients,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = minimize(config)
    report = _make_report(
        "optimize",
        {"n": args.n, "m": args.m, "restarts": args.restarts, "iters": args.iters,
         "workers": args.workers, "warm_starts": not args.no_warm_starts},
        result.to_dict(),
        args.seed,
    )
    if args.format == "json":
        print(report.to_json())
    else:
        lb = result.lower_bound
        print(f"best value  {_fmt(result.best_value)}   (upper estimate of the infimum)")
        print(f"lower bound {_fmt(lb.value)}   ({lb.formula.value})")
        print(f"sandwich    {'OK' if result.sandwich_ok else 'VIOLATED'}")
    _persist(report, args.out)
    return EXIT_OK if result.sandwich_ok else EXIT_VIOLATION


# ------------------------------------------------------------------- phi ----


def cmd_phi(args) -> int:
    if not (1.0 <= args.alpha_min <= args.alpha_max) or args.step <= 0.0:
        print("error: need 1 <= --alpha-min <= --alpha-max and --step > 0", file=sys.stderr)
        return EXIT_USAGE
    # endpoints included; the grid is alpha_min + i*step (index multiplication)
    count = int(math.floor((args.alpha_max - args.alpha_min) / args.step + 1e-12)) + 1
    grid = [args.alpha_min + i * args.step for i in range(count)]
    if grid[-1] < args.alpha_max - 1e-12:
        grid.append(args.alpha_max)
    rows = [
        {"alpha": a, "phi": bounds.phi(a), "sqrt_phi": math.sqrt(bounds.phi(a)),
         "ceil_envelope": bounds.ceil_envelope(a)}
        for a in grid
    ]
    phis = [r["phi"] for r in rows]
    if any(b - a < -1e-12 for a, b in zip(phis, phis[1:])):
        raise ArithmeticError("phi curve must be nondecreasing")
    if abs(bounds.phi(3.0 - 1e-9) - bounds.phi(3.0 + 1e-9)) > 1e-8:
        raise ArithmeticError("phi curve must be continuous at the branch point")
    report = _make_report(
        "phi",
        {"alpha_min": args.alpha_min, "alpha_max": args.alpha_max, "step": args.step},
        {"rows": rows},
        args.seed,
    )
    if args.format == "json":
        print(report.to_json())
    else:
        print("alpha,phi,sqrt_phi,ceil_envelope")
        for r in rows:
            print(f"{_fmt(r['alpha'])},{_fmt(r['phi'])},{_fmt(r['sqrt_phi'])},"
                  f"{_fmt(r['ceil_envelope'])}")
    _persist(report, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser ----


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="stdout format (default csv)")
    common.add_argument("--out", default="./runs",
                        help="directory for persisted run reports (default ./runs)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")

    parser = argparse.ArgumentParser(
        prog="powersum",
        description="Power-sum lower bounds, kernel identities, extremal "
                    "constructions and inf-max estimation on the unit circle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common],
                       help="tabulate every bound formula for given n, m|j or alpha")
    b.add_argument("--n", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--j", type=int)
    b.add_argument("--alpha", type=float)
    b.add_argument("--c", type=float, default=2.0,
                   help="range multiplier for the unimodular comparison bound")
    b.add_argument("--corollary3", action="store_true",
                   help="emit only the sandwich endpoints over 1..n^2+n-1")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", parents=[common],
                       help="random-system campaign over all inequalities")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--n-max", type=int, default=20)
    v.add_argument("--m-max", type=int, default=400)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", parents=[common],
                       help="build and certify the character system for a prime p")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_construct)

    o = sub.add_parser("optimize", parents=[common],
                       help="smoothed-minimax search for inf max |S(nu)|")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--m", type=int, required=True)
    o.add_argument("--restarts", type=int, default=64)
    o.add_argument("--iters", type=int, default=2000)
    o.add_argument("--workers", type=int, default=1)
    o.add_argument("--no-warm-starts", action="store_true")
    o.add_argument("--check-gradients", action="store_true")
    o.set_defaults(func=cmd_optimize)

    f = sub.add_parser("phi", parents=[common],
                       help="emit the envelope curve alpha -> (phi, sqrt phi, ceil)")
    f.add_argument("--alpha-min", type=float, required=True)
    f.add_argument("--alpha-max", type=float, required=True)
    f.add_argument("--step", type=float, default=0.1)
    f.set_defaults(func=cmd_phi)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
