"""Fejer kernel, its triangular weights, and one-sided bounds for real sums.

The kernel's nonnegativity is what powers everything here: it forces the
weighted second moment of a real exponential sum with positive coefficients
away from zero, which then yields lower bounds on the maximum of the sum's
positive part over nu = 1..m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundResult, Formula
from .core import RealExponentialSum, frac_mul, reduce_turns

_REL_TOL = 1e-9  # slack for the `holds` verdicts of the inequality checks


@dataclass(frozen=True, eq=False)
class FejerWeights:
    """Triangular weights w_nu = 1 - nu/(m+1) for nu = 1..m; they sum to m/2."""

    m: int
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        m = int(self.m)
        if m < 1:
            raise ValueError("m must be >= 1")
        w = 1.0 - np.arange(1, m + 1, dtype=np.float64) / (m + 1.0)
        w.flags.writeable = False
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class AlphaBeta:
    """Weighted fractions of positive / negative values; alpha + beta <= 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        lo = -1e-12
        hi = 1.0 + 1e-12
        if not (lo <= self.alpha <= hi and lo <= self.beta <= hi):
            raise ValueError(f"alpha/beta out of [0, 1]: {self.alpha}, {self.beta}")
        if self.alpha + self.beta > 1.0 + 1e-12:
            raise ValueError(
                f"alpha + beta = {self.alpha + self.beta} exceeds 1; "
                "the weight identity rules this out for any real sum"
            )


def fejer_sum_form(m: int, x: float) -> float:
    """Kernel value as the (2m+1)-term sum  sum_{|nu|<=m} (1 - |nu|/(m+1)) e(nu x).

    The +-nu pairing makes the sum real; the imaginary residue is checked
    against 1e-10 and discarded.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    nus = np.arange(-m, m + 1, dtype=np.float64)
    w = 1.0 - np.abs(nus) / (m + 1.0)
    total = (w * np.exp(2j * np.pi * nus * float(x))).sum()
    if abs(total.imag) > 1e-10:
        raise ArithmeticError(f"kernel sum not real: imag = {total.imag:.3e}")
    return float(total.real)


def _abs_sin_pi(u: float) -> float:
    """|sin(pi u)| for u in [0, 1), via reflection so the argument stays small.

    sin(pi u) evaluated directly loses relative accuracy as u approaches 1
    (the argument lands near pi); 1 - u is exact there by Sterbenz.
    """
    d = u if u <= 0.5 else 1.0 - u
    return math.sin(math.pi * d)


def fejer_closed_form(m: int, x: float) -> float:
    """Kernel value as sin^2(pi (m+1) x) / ((m+1) sin^2(pi x)), never negative.

    x = 0 (mod 1) is the removable singularity with limit m+1 and is handled
    explicitly; for 0 < |sin(pi x)| < 1e-8 the sum form is used instead to
    avoid 0/0 amplification.  Both sine arguments are reduced exactly (the
    numerator's through the integer arithmetic of frac_mul), which keeps the
    quotient relative-accurate even right next to the singularities.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    x = reduce_turns(float(x))
    s = _abs_sin_pi(x)
    if s < 1e-8:
        if x == 0.0:
            return m + 1.0
        return fejer_sum_form(m, x)
    t = 2.0 * frac_mul(0.5 * x, m + 1)  # (m+1) x mod 2, exact
    if t >= 1.0:
        t -= 1.0  # |sin| has period 1 in turns-of-pi
    r = _abs_sin_pi(t) / s
    return r * r / (m + 1.0)


def alpha_beta(h: RealExponentialSum, m: int) -> AlphaBeta:
    """Weighted positive/negative mass fractions of h over nu = 1..m.

    alpha = (2/m) sum of w_nu over nu with h(nu) > 0, beta the same over
    h(nu) < 0.  Values within 1e-12 * sum|c_k| of zero count as exact zeros
    and contribute to neither side; excluding near-zeros only shrinks both
    masses, the safe direction for the alpha + beta <= 1 constraint.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    vals = h.values(m)
    w = FejerWeights(m).weights
    tol = 1e-12 * float(np.abs(h.coefficients).sum())
    alpha = 2.0 / m * float(w[vals > tol].sum())
    beta = 2.0 / m * float(w[vals < -tol].sum())
    return AlphaBeta(alpha, beta)


def lemma1_check(h: RealExponentialSum, a: float, b: float, m: int):
    """Check  sum_{nu=1..m} w_nu g(nu)^2  >=  ((m+1) B - A^2) / 2.

    ``h`` is the real sum g; ``a`` and ``b`` are its coefficient moments
    (a = value at frequency zero = sum of coefficients, b = sum of squared
    coefficients).  Returns (lhs, rhs, holds); raises MalformedInputError if
    g fails its realness invariant.
    """
    m = int(m)
    vals = h.values(m)
    w = FejerWeights(m).weights
    lhs = float((w * vals * vals).sum())
    rhs = ((m + 1) * b - a * a) / 2.0
    return lhs, rhs, lhs >= rhs - _REL_TOL * (abs(lhs) + abs(rhs))


def lemma2_check(h: RealExponentialSum, a: float, b: float, big_m: float, m: int):
    """Check  sum_{nu=1..m} w_nu g+(nu)  >=  (B(m+1) - A M - A^2) / (4 M).

    ``big_m`` must dominate |g(nu)| on 1..m; the cap is verified and a
    violation raises ValueError("M too small ...").
    """
    m = int(m)
    if big_m <= 0.0:
        raise ValueError("M too small: the cap must be positive")
    vals = h.values(m)
    worst = int(np.abs(vals).argmax())
    if abs(vals[worst]) > big_m * (1.0 + 1e-12):
        raise ValueError(
            f"M too small: |g({worst + 1})| = {abs(vals[worst])!r} exceeds M = {big_m!r}"
        )
    w = FejerWeights(m).weights
    lhs = float((w * np.where(vals > 0.0, vals, 0.0)).sum())
    rhs = (b * (m + 1) - a * big_m - a * a) / (4.0 * big_m)
    return lhs, rhs, lhs >= rhs - _REL_TOL * (abs(lhs) + abs(rhs))


def partial_sum_check(h: RealExponentialSum, a: float, m: int):
    """Check the kernel-positivity consequence  sum_{nu=1..m} w_nu g(nu) >= -A/2."""
    m = int(m)
    vals = h.values(m)
    w = FejerWeights(m).weights
    lhs = float((w * vals).sum())
    rhs = -a / 2.0
    return lhs, rhs, lhs >= rhs - _REL_TOL * (abs(lhs) + abs(rhs))


def theorem1_bound(a: float, b: float, big_m: float, m: int) -> float:
    """Lower bound (B(m+1) - A M - A^2) / (2 M m) on max_{nu=1..m} g+(nu).

    May be negative, in which case it is trivially true.
    """
    if big_m <= 0.0:
        raise ValueError("nonpositive M")
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    return (b * (m + 1) - a * big_m - a * a) / (2.0 * big_m * m)


def theorem2_bound(a: float, b: float, big_m: float, m: int) -> BoundResult:
    """Large-m one-sided bound on max g+(nu), case-split on D = B(m+1) - A^2 - m M^2.

    D >= 0 selects (B(m+1) - A^2)/(m M); the two cases agree at D = 0 and
    this branch avoids the extra positivity condition.  D < 0 selects
    M + 2 D / (B(m+1) - A^2 - A M), valid only while that denominator is
    positive -- otherwise the result comes back flagged inapplicable rather
    than raised, so grid tabulation never aborts.
    """
    if big_m <= 0.0:
        raise ValueError("nonpositive M")
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    inputs = {"A": a, "B": b, "M": big_m, "m": m}
    d = b * (m + 1) - a * a - m * big_m * big_m
    if d >= 0.0:
        val = (b * (m + 1) - a * a) / (m * big_m)
        return BoundResult(
            val,
            False,
            Formula.T2a,
            True,
            (("D >= 0", True),),
            inputs,
            m,
            notes="bound on the max of the positive part",
        )
    den = b * (m + 1) - a * a - a * big_m
    if den > 0.0:
        val = big_m + 2.0 * d / den
        return BoundResult(
            val,
            False,
            Formula.T2b,
            True,
            (("D < 0", True), ("denominator positive", True)),
            inputs,
            m,
            notes="bound on the max of the positive part",
        )
    return BoundResult(
        math.nan,
        False,
        Formula.T2b,
        False,
        (("D < 0", True), ("denominator positive", False)),
        inputs,
        m,
        notes="bound on the max of the positive part",
    )
