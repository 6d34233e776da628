"""Empirical upper estimates for inf-max power sums via smoothed minimax descent.

The objective is the temperature-smoothed maximum of |S(nu)|^2 over
nu = 1..m (|S|^2 is smooth in the angles where |S| is not), minimized by
normalized-gradient descent with geometric step and temperature decay,
restarted from independent random initializations plus two deterministic
warm starts.  The reported value is always the hard, unsmoothed maximum of
the final iterate, so no smoothing bias survives into reports.

Nothing here certifies global optimality: minimize() produces upper bounds
on the infimum only, and every report records the lower bound it was
sandwiched against.

Reproducibility: restart r draws its initialization from the counter-based
Philox stream keyed by (seed, r), so runs are bit-identical for a fixed
backend regardless of worker count or execution order.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import backend
from .bounds import BoundResult, best_lower_bound
from .constructions import is_prime, montgomery_system
from .core import UnimodularSystem

_WARM_STEP0 = 1e-3
_WARM_TAU0 = 1e-3

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class OptimizerConfig:
    """Full description of a minimize() run; everything that affects the result."""

    n: int
    m: int
    restarts: int = 64
    iterations: int = 2000
    step_size: float = 0.02
    step_decay: float = 0.9916
    tau0: float | None = None  # resolved to 2n when left unset
    tau_min: float = 1e-7
    tau_decay: float = 0.4
    seed: int = 0
    check_gradients: bool = False
    warm_starts: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "restarts", int(self.restarts))
        object.__setattr__(self, "iterations", int(self.iterations))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "workers", int(self.workers))
        if self.tau0 is None:
            object.__setattr__(self, "tau0", 2.0 * self.n)
        ok = (
            self.n >= 1
            and self.m >= 1
            and self.restarts >= 1
            and self.iterations >= 0
            and self.step_size > 0.0
            and 0.0 < self.step_decay <= 1.0
            and self.tau0 > 0.0
            and self.tau_min > 0.0
            and self.tau_min <= self.tau0
            and 0.0 < self.tau_decay < 1.0
            and self.workers >= 1
        )
        if not ok:
            raise ValueError(f"invalid config: {self}")


@dataclass(frozen=True)
class OptimizerReport:
    """Result of one minimize() run, serializable and reproducible from its config."""

    config: OptimizerConfig
    best_angles: tuple
    best_value: float
    best_restart: int
    per_restart_values: tuple
    lower_bound: BoundResult
    sandwich_ok: bool
    backend: str
    iterations_total: int
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "best_angles": list(self.best_angles),
            "best_value": self.best_value,
            "best_restart": self.best_restart,
            "per_restart_values": list(self.per_restart_values),
            "lower_bound": self.lower_bound.to_dict(),
            "sandwich_ok": self.sandwich_ok,
            "backend": self.backend,
            "iterations_total": self.iterations_total,
            "wall_time_s": self.wall_time_s,
            "note": "upper estimate of the infimum only; no global optimality claimed",
        }


def seeded_systems(kind: str, n: int, seed: int = 0) -> UnimodularSystem:
    """Named initializers: 'random', 'roots_of_unity' (theta_k = k/n) or
    'montgomery' (the character system; needs n+1 prime)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "random":
        rng = np.random.Generator(np.random.Philox(key=[seed & _SEED_MASK, 0]))
        return UnimodularSystem(rng.random(n))
    if kind == "roots_of_unity":
        return UnimodularSystem(np.arange(1, n + 1, dtype=np.float64) / n)
    if kind == "montgomery":
        if not is_prime(n + 1):
            raise ValueError(f"n + 1 = {n + 1} is not prime")
        return montgomery_system(n + 1)
    raise ValueError(f"unknown initializer kind {kind!r}")


def objective(system: UnimodularSystem, m: int, tau: float):
    """Smoothed maximum tau * log sum_nu exp(|S(nu)|^2 / tau) and its gradient.

    A smooth upper bound on max |S(nu)|^2, exceeding it by at most
    tau * log m; the gradient combines softmax weights with the analytic
    derivative d|S(nu)|^2/dtheta_k = 2 Re(conj(S(nu)) 2*pi*i*nu e(theta_k nu)).
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    if not tau > 0.0:
        raise ValueError("tau must be positive")
    value, grad = backend.lse_objective(
        np.ascontiguousarray(system.angles, dtype=np.float64), m, float(tau)
    )
    return float(value), grad


def finite_difference_gradient(
    system: UnimodularSystem, m: int, tau: float, h: float = 1e-6
) -> np.ndarray:
    """Central-difference gradient of the smoothed objective (the test oracle)."""
    base = np.asarray(system.angles, dtype=np.float64)
    out = np.empty(base.size)
    for k in range(base.size):
        hi = base.copy()
        lo = base.copy()
        hi[k] += h
        lo[k] -= h
        vh, _ = backend.lse_objective(np.ascontiguousarray(np.mod(hi, 1.0)), m, tau)
        vl, _ = backend.lse_objective(np.ascontiguousarray(np.mod(lo, 1.0)), m, tau)
        out[k] = (vh - vl) / (2.0 * h)
    return out


def _check_gradient(angles: np.ndarray, m: int, tau: float, rtol: float = 1e-5):
    system = UnimodularSystem(angles)
    value, g = objective(system, m, tau)
    fd = finite_difference_gradient(system, m, tau)
    # absolute floor absorbs difference-quotient noise at stationary points
    tol = rtol * max(float(np.abs(g).max()), float(np.abs(fd).max())) + 1e-6 * (1.0 + abs(value))
    err = float(np.abs(g - fd).max())
    if err > tol:
        raise ArithmeticError(
            f"gradient check failed: deviation {err:.3e} > tolerance {tol:.3e}"
        )


def hard_max(angles: np.ndarray, m: int) -> float:
    """Unsmoothed max_{nu=1..m} |S(nu)| at the given angles."""
    val, _ = backend.sweep_max(
        np.ones(len(angles)), np.ascontiguousarray(angles, dtype=np.float64), int(m)
    )
    return float(val)


def _warm_kinds(config: OptimizerConfig) -> list[str]:
    if not config.warm_starts:
        return []
    kinds = []
    if config.n >= 2 and is_prime(config.n + 1):
        kinds.append("montgomery")
    kinds.append("roots_of_unity")
    return kinds[: config.restarts]


def _run_restart(config: OptimizerConfig, r: int, warm: list[str]) -> tuple[float, np.ndarray]:
    if r < len(warm):
        theta0 = np.array(seeded_systems(warm[r], config.n).angles)
        step0, tau0 = _WARM_STEP0, _WARM_TAU0
    else:
        rng = np.random.Generator(np.random.Philox(key=[config.seed & _SEED_MASK, r]))
        theta0 = rng.random(config.n)
        step0, tau0 = config.step_size, config.tau0
    if config.check_gradients and config.n >= 1:
        _check_gradient(theta0, config.m, max(tau0, 0.05))
    final = backend.descent_run(
        np.ascontiguousarray(theta0),
        config.m,
        config.iterations,
        step0,
        config.step_decay,
        tau0,
        min(config.tau_min, tau0),  # keep the floor below a warm start's tau0
        config.tau_decay,
    )
    return hard_max(final, config.m), np.asarray(final)


def minimize(config: OptimizerConfig) -> OptimizerReport:
    """Run all restarts, keep the best final iterate, sandwich against the bound.

    Warm starts (the character system when n+1 is prime, then roots of
    unity) occupy the first restart slots with a small-step polish schedule;
    the remaining restarts draw uniform random angles from their own Philox
    streams and run the full annealing schedule.  The reduction is an
    order-independent min with ties broken by restart index, so reports are
    identical for 1 or many workers.
    """
    t0 = time.perf_counter()
    warm = _warm_kinds(config)
    indices = range(config.restarts)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as ex:
            results = list(ex.map(lambda r: _run_restart(config, r, warm), indices))
    else:
        results = [_run_restart(config, r, warm) for r in indices]
    values = [v for v, _ in results]
    best_r = min(indices, key=lambda r: (values[r], r))
    best_value, best_angles = results[best_r]
    lb = best_lower_bound(config.n, config.m)
    sandwich_ok = best_value >= lb.value - 1e-9
    return OptimizerReport(
        config=config,
        best_angles=tuple(float(a) for a in best_angles),
        best_value=best_value,
        best_restart=best_r,
        per_restart_values=tuple(values),
        lower_bound=lb,
        sandwich_ok=sandwich_ok,
        backend=backend.BACKEND,
        iterations_total=config.iterations * config.restarts,
        wall_time_s=time.perf_counter() - t0,
    )
