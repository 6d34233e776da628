"""Closed-form lower bounds for power-sum maxima and a best-bound selector.

Every bound is returned as a BoundResult that says what it bounds (|S| or
|S|^2 via the ``squared`` flag), over which range 1..m it applies, and which
of its side conditions hold.  Inapplicable bounds are flagged, never raised,
so tabulating over (n, m) grids cannot abort halfway.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .constructions import is_prime
from .core import MomentSummary


class Formula(str, Enum):
    """Identifiers for every bound formula the toolkit knows."""

    T1 = "T1"
    T2a = "T2a"
    T2b = "T2b"
    T3i0 = "T3i0"
    T3i1 = "T3i1"
    C1i = "C1i"
    C1ii = "C1ii"
    T4 = "T4"
    C2 = "C2"
    C3lower = "C3lower"
    C3upper = "C3upper"
    Phi = "Phi"
    CeilEnvelope = "CeilEnvelope"
    Turan = "Turan"
    Andersson = "Andersson"
    CNS = "CNS"


@dataclass(frozen=True)
class BoundResult:
    """A computed bound with its formula id, inputs and applicability state."""

    value: float
    squared: bool
    formula: Formula
    applicable: bool = True
    conditions: tuple = ()
    inputs: dict = field(default_factory=dict)
    range_top: int | None = None
    notes: str = ""

    def __post_init__(self):
        if not self.applicable and not any(not ok for _, ok in self.conditions):
            raise ValueError("an inapplicable result must carry a failed condition")

    def reported_value(self) -> float:
        """|S|-scale value; the square root happens here and only here."""
        if math.isnan(self.value):
            return self.value
        if self.squared:
            return math.sqrt(self.value) if self.value > 0.0 else 0.0
        return self.value

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "squared": self.squared,
            "formula": self.formula.value,
            "applicable": self.applicable,
            "conditions": [[name, bool(ok)] for name, ok in self.conditions],
            "inputs": dict(self.inputs),
            "range_top": self.range_top,
            "notes": self.notes,
            "reported_value": self.reported_value(),
        }


def pure_moments(n: int) -> MomentSummary:
    """Moment summary of a pure system: B_k = n, A3 = B3q = n^2 - n."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    fn = float(n)
    return MomentSummary(fn, fn, fn, fn, fn * fn - fn, fn * fn - fn)


def theorem3_bounds(mom: MomentSummary, m: int) -> tuple[BoundResult, BoundResult]:
    """Two weighted lower bounds on max_{nu=1..m} |g(nu)|^2 from the moments.

    The first holds unconditionally.  The second needs m >= (B - A^2)/B4 and
    positive numerator and denominator (automatic for m large enough); the
    three conditions are evaluated independently and reported separately.
    Here A = A3 and B = B3q, the coefficient moments of the pair spectrum.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    a = mom.A3
    bq = mom.B3q
    b2 = mom.B2
    b4 = mom.B4
    i0_val = b2 + bq * (1.0 + 1.0 / m) / (2.0 * b2) - (a * b2 + a * a) / (2.0 * b2 * m)
    i0 = BoundResult(i0_val, True, Formula.T3i0, True, (), {"m": m}, m)
    num = a * a - bq + m * b4
    den = bq * (m + 1) - a * b2 - a * a
    c_m = m >= (bq - a * a) / b4
    c_num = num > 0.0
    c_den = den > 0.0
    i1_val = 2.0 * b2 - 2.0 * num / den if den != 0.0 else math.nan
    i1 = BoundResult(
        i1_val,
        True,
        Formula.T3i1,
        applicable=c_m and c_num and c_den,
        conditions=(
            ("m >= (B - A^2)/B4", c_m),
            ("numerator positive", c_num),
            ("denominator positive", c_den),
        ),
        inputs={"m": m},
        range_top=m,
    )
    return i0, i1


def corollary1(n: int, m: int) -> tuple[BoundResult, BoundResult]:
    """Pure-case lower bounds on max_{nu=1..m} |S(nu)|^2.

    (i) holds for every m >= 1; (ii) only for m > n^2 and n >= 2.
    """
    n = int(n)
    m = int(m)
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    i_val = n + (n - 1) * (1 + m - n * n) / (2.0 * m)
    i = BoundResult(i_val, True, Formula.C1i, True, (), {"n": n, "m": m}, m)
    c_m = m > n * n
    c_n = n >= 2
    den = (n - 1) * (1 + m - n * n)
    if c_n and den != 0:
        ii_val = 2.0 * n - 2.0 * (1 + m - 2 * n * n + n**3) / den
    else:
        ii_val = math.nan
    ii = BoundResult(
        ii_val,
        True,
        Formula.C1ii,
        applicable=c_m and c_n,
        conditions=(("m > n^2", c_m), ("n >= 2", c_n)),
        inputs={"n": n, "m": m},
        range_top=m,
    )
    return i, ii


def theorem4(n: int, j: int) -> BoundResult:
    """sqrt(n + (1+j)(n-1) / (2(j+n^2))), a lower bound over nu = 1..n^2+j."""
    n = int(n)
    j = int(j)
    if n < 1 or j < 0:
        raise ValueError("need n >= 1 and j >= 0")
    val = math.sqrt(n + (1 + j) * (n - 1) / (2.0 * (j + n * n)))
    return BoundResult(val, False, Formula.T4, True, (), {"n": n, "j": j}, n * n + j)


def corollary2(n: int) -> BoundResult:
    """sqrt(n + 1/(2n) - 1/(2n^2)) over nu = 1..n^2; algebraically theorem4(n, 0)."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    val = math.sqrt(n + 1.0 / (2.0 * n) - 1.0 / (2.0 * n * n))
    return BoundResult(val, False, Formula.C2, True, (), {"n": n}, n * n)


def corollary3(n: int) -> tuple[BoundResult, BoundResult]:
    """Sandwich endpoints over nu = 1..n^2+n-1.

    The lower endpoint holds for every n; the upper endpoint sqrt(n+1) is the
    value of the character construction and needs n+1 prime.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    top = n * n + n - 1
    lo_val = math.sqrt(n + 0.5 - (2 * n - 1) / (2.0 * (n * n + n - 1)))
    lower = BoundResult(lo_val, False, Formula.C3lower, True, (), {"n": n}, top)
    prime = is_prime(n + 1)
    upper = BoundResult(
        math.sqrt(n + 1.0),
        False,
        Formula.C3upper,
        applicable=prime,
        conditions=(("n + 1 prime", prime),),
        inputs={"n": n},
        range_top=top,
        notes="upper bound attained by the order-(n) character construction",
    )
    return lower, upper


def phi(alpha: float) -> float:
    """Piecewise envelope exponent: 3/2 - 1/(2 alpha) up to alpha = 3, then 2 - 2/alpha.

    Both branches give 4/3 at alpha = 3, so the function is continuous, and
    it increases from 1 at alpha = 1 towards 2.
    """
    alpha = float(alpha)
    if not alpha >= 1.0:
        raise ValueError(f"alpha out of domain: need alpha >= 1, got {alpha}")
    if alpha <= 3.0:
        return 1.5 - 0.5 / alpha
    return 2.0 - 2.0 / alpha


def ceil_envelope(alpha: float) -> float:
    """sqrt(ceil(alpha)): the constructive upper envelope, asymptotic only.

    The o(1) defect of the underlying block construction is not quantified,
    so this is an asymptotic envelope, not a finite-n certificate.
    """
    alpha = float(alpha)
    if not alpha >= 1.0:
        raise ValueError(f"alpha out of domain: need alpha >= 1, got {alpha}")
    return math.sqrt(math.ceil(alpha))


def classical_bounds(n: int, m: int, c: float = 2.0) -> list[BoundResult]:
    """The comparison bounds: max |S| >= 1 over 1..n, the sqrt(q) family over
    1..(2nq - q(q+1) + 1) for 1 <= q <= n, and sqrt((cn - n + 1)/c) over
    1..floor(cn) for unimodular systems.

    The family entry reports the largest inner q whose range fits inside
    1..m; each entry labels its own range and is flagged by whether that
    range fits.
    """
    n = int(n)
    m = int(m)
    c = float(c)
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    out = [
        BoundResult(
            1.0,
            False,
            Formula.Turan,
            applicable=n <= m,
            conditions=(("range 1..n within 1..m", n <= m),),
            inputs={"n": n, "m": m},
            range_top=n,
        )
    ]
    best_q = 0
    for q in range(1, n + 1):
        if 2 * n * q - q * (q + 1) + 1 <= m:
            best_q = q
    if best_q:
        top = 2 * n * best_q - best_q * (best_q + 1) + 1
        out.append(
            BoundResult(
                math.sqrt(best_q),
                False,
                Formula.Andersson,
                True,
                (("some inner parameter fits", True),),
                {"n": n, "m": m, "q": best_q},
                top,
            )
        )
    else:
        out.append(
            BoundResult(
                1.0,
                False,
                Formula.Andersson,
                False,
                (("some inner parameter fits", False),),
                {"n": n, "m": m, "q": 1},
                2 * n - 1,
            )
        )
    top = int(math.floor(c * n))
    fits = top <= m
    out.append(
        BoundResult(
            math.sqrt((c * n - n + 1) / c),
            False,
            Formula.CNS,
            applicable=(c > 1.0) and fits,
            conditions=(("c > 1", c > 1.0), ("range 1..floor(cn) within 1..m", fits)),
            inputs={"n": n, "m": m, "c": c},
            range_top=top,
        )
    )
    return out


def best_lower_bound(n: int, m: int) -> BoundResult:
    """Largest applicable pure-case lower bound on max_{nu=1..m} |S(nu)|.

    Candidates: both corollary1 bounds (square-rooted) and every classical
    bound whose range fits inside 1..m, with the CNS parameter set to
    c = m/n so its range is exactly 1..m.  Ties go to the earlier formula.
    """
    n = int(n)
    m = int(m)
    i, ii = corollary1(n, m)
    cands = [i, ii]
    cands += classical_bounds(n, m, c=(m / n) if m > n else 2.0)
    best = None
    best_rv = -math.inf
    for r in cands:
        if not r.applicable:
            continue
        rv = r.reported_value()
        if math.isnan(rv):
            continue
        if rv > best_rv:
            best = r
            best_rv = rv
    return BoundResult(
        best_rv,
        False,
        best.formula,
        True,
        best.conditions,
        {"n": n, "m": m, **best.inputs},
        m,
        notes="best applicable lower bound for the range 1..m",
    )
