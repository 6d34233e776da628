"""Point systems on the unit circle and numerically careful power-sum evaluation.

Angles live in turns (fractions of a full revolution), so ``e(x)`` always
means ``exp(2*pi*i*x)``.  Turns keep rational frequencies such as ``k/p``
exactly representable in binary64 arithmetic and make integer periodicity
testable without accumulated pi-multiplication error.

All values are immutable after construction and every function here is pure,
so everything is safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend

TWO_PI = 2.0 * math.pi

_TWO_53 = 9007199254740992.0  # 2**53


class MalformedInputError(ValueError):
    """A structurally invalid value, e.g. a nominally real sum that is not."""


def reduce_turns(x: float) -> float:
    """Reduce a finite angle to the half-open interval [0, 1) turns."""
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {x!r}")
    r = math.fmod(x, 1.0)
    if r < 0.0:
        r += 1.0
    if r >= 1.0:  # fmod(-tiny, 1) + 1 rounds up to 1.0
        r = 0.0
    return r


def frac_mul(theta: float, nu: int) -> float:
    """(theta * nu) mod 1, computed exactly.

    Every binary64 ``theta`` in [0, 1) is a dyadic rational M / 2**s; the
    reduction of ``M * nu`` modulo 2**s is then exact integer arithmetic and
    only the final conversion back to float rounds (one half-ulp).  This is
    what lets e(theta * nu) stay accurate for |nu| up to 1e7 and beyond,
    where the naive product would already have lost ~1e-9 turns.
    """
    if theta == 0.0 or nu == 0:
        return 0.0
    mant, expo = math.frexp(theta)  # theta = mant * 2**expo, 0.5 <= mant < 1
    m_int = int(mant * _TWO_53)  # exact: mant has at most 53 significant bits
    shift = 53 - expo  # theta = m_int / 2**shift with shift >= 53
    r = (m_int * nu) & ((1 << shift) - 1)  # mod 2**shift, sign handled by &
    if shift > 1020:  # subnormal-range theta: keep the top bits, float(r) would overflow
        r >>= shift - 64
        shift = 64
    f = math.ldexp(float(r), -shift)
    return f if f < 1.0 else 0.0  # float(r) can round up to 2**shift


def e(x: float) -> complex:
    """exp(2*pi*i*x) for x in turns."""
    return complex(math.cos(TWO_PI * x), math.sin(TWO_PI * x))


def _as_angle_array(angles) -> np.ndarray:
    a = np.ascontiguousarray(angles, dtype=np.float64).reshape(-1)
    if a.size < 1:
        raise ValueError("a system needs at least one point")
    if not np.all(np.isfinite(a)):
        raise ValueError("angles must be finite")
    a = np.mod(a, 1.0)
    a[a >= 1.0] = 0.0  # np.mod(-tiny, 1.0) can round up to 1.0
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class UnimodularSystem:
    """n points z_k = e(theta_k) with |z_k| = 1, given by angles in turns."""

    angles: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "angles", _as_angle_array(self.angles))

    @property
    def n(self) -> int:
        return self.angles.size

    def points(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.angles)


@dataclass(frozen=True, eq=False)
class WeightedSystem:
    """Positive weights b_k attached to angles theta_k; g(nu) = sum b_k e(theta_k nu)."""

    weights: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        b = np.ascontiguousarray(self.weights, dtype=np.float64).reshape(-1)
        a = _as_angle_array(self.angles)
        if b.size != a.size:
            raise ValueError("weights and angles must have the same length")
        if not np.all(np.isfinite(b)) or not np.all(b > 0.0):
            raise ValueError("weights must be finite and strictly positive")
        b.flags.writeable = False
        object.__setattr__(self, "weights", b)
        object.__setattr__(self, "angles", a)

    @property
    def n(self) -> int:
        return self.angles.size


@dataclass(frozen=True)
class EvaluationRange:
    """The index range nu = 1, ..., m over which maxima are taken."""

    m: int

    def __post_init__(self):
        if int(self.m) < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "m", int(self.m))


def _m_of(rng) -> int:
    m = rng.m if isinstance(rng, EvaluationRange) else int(rng)
    if m < 1:
        raise ValueError(f"range top must be >= 1, got {m}")
    return m


@dataclass(frozen=True)
class MomentSummary:
    """Weight moments B_k = sum b^k and the derived quantities A3, B3q.

    A3 = B1^2 - B2 and B3q = B2^2 - B4 are the moments of the pair-difference
    spectrum: A3 = sum of its coefficients, B3q = sum of their squares.  For a
    pure system (all b_k = 1) every B_k equals n and A3 = B3q = n^2 - n.
    """

    B1: float
    B2: float
    B3: float
    B4: float
    A3: float
    B3q: float


@dataclass(frozen=True, eq=False)
class RealExponentialSum:
    """Real-valued trigonometric sum h(nu) = constant + sum_k c_k e(lambda_k nu).

    The term list is stored closed under (c, lam) <-> (c, -lam mod 1), which
    is what makes values at integer arguments real.  Evaluation asserts the
    imaginary residue stays below 1e-10 * (|constant| + sum |c_k|) and raises
    MalformedInputError otherwise, so a broken pairing surfaces at use time.
    """

    constant: float
    coefficients: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(self.coefficients, dtype=np.float64).reshape(-1)
        f = np.ascontiguousarray(self.frequencies, dtype=np.float64).reshape(-1)
        if c.size != f.size:
            raise ValueError("coefficients and frequencies must have the same length")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(f))):
            raise ValueError("terms must be finite")
        f = np.mod(f, 1.0)
        f[f >= 1.0] = 0.0
        c.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "frequencies", f)

    @property
    def n_terms(self) -> int:
        return self.coefficients.size

    @property
    def scale(self) -> float:
        """|constant| + sum |c_k|, the natural magnitude for tolerances."""
        return abs(self.constant) + float(np.abs(self.coefficients).sum())

    def _check_real(self, imag_max: float) -> None:
        tol = 1e-10 * self.scale
        if imag_max > tol:
            raise MalformedInputError(
                f"sum is not real at integer argument: |imag| = {imag_max:.3e} "
                f"exceeds {tol:.3e}; term list is not closed under frequency negation"
            )

    def __call__(self, nu: int) -> float:
        """Value at the integer nu, via exact per-term angle reduction."""
        nu = int(nu)
        acc = 0j
        for c, lam in zip(self.coefficients, self.frequencies):
            acc += c * e(frac_mul(float(lam), nu))
        self._check_real(abs(acc.imag))
        return self.constant + acc.real

    def values(self, rng) -> np.ndarray:
        """Values at nu = 1..m as a float array (vectorized direct evaluation)."""
        m = _m_of(rng)
        if self.n_terms == 0:
            return np.full(m, self.constant)
        nus = np.arange(1, m + 1, dtype=np.float64)
        terms = np.exp(2j * np.pi * np.outer(nus, self.frequencies))
        vals = terms @ self.coefficients
        self._check_real(float(np.abs(vals.imag).max()))
        return self.constant + vals.real

    @classmethod
    def from_weighted(cls, system: WeightedSystem) -> "RealExponentialSum":
        """View a weighted system as a real sum; frequency-zero terms become the constant.

        The caller is responsible for the system actually being real-valued
        (angles paired under negation with matching weights); evaluation
        checks it.
        """
        at_zero = system.angles == 0.0
        constant = float(system.weights[at_zero].sum())
        return cls(constant, system.weights[~at_zero], system.angles[~at_zero])


def eval_pure(system: UnimodularSystem, nu: int) -> complex:
    """S(nu) = sum_k e(theta_k nu), exact angle reduction per term."""
    nu = int(nu)
    acc = 0j
    for th in system.angles:
        acc += e(frac_mul(float(th), nu))
    return acc


def eval_weighted(system: WeightedSystem, nu: int) -> complex:
    """g(nu) = sum_k b_k e(theta_k nu); g(0) is exactly the weight sum."""
    nu = int(nu)
    acc = 0j
    for b, th in zip(system.weights, system.angles):
        acc += b * e(frac_mul(float(th), nu))
    return acc


def max_abs_over_range(system, rng) -> tuple[float, int]:
    """(max |g(nu)|, smallest attaining nu) over nu = 1..m.

    Runs the incremental sweep: each power advances by one complex rotation,
    and all accumulated powers are renormalized to unit modulus every 1024
    steps, which keeps drift below ~1e-10 out to m = 1e7 in binary64.
    """
    m = _m_of(rng)
    if isinstance(system, WeightedSystem):
        weights = system.weights
    else:
        weights = np.ones(system.n)
    best, arg = backend.sweep_max(
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(system.angles, dtype=np.float64),
        m,
    )
    return float(best), int(arg)


def abs_sq_over_range(system, rng) -> np.ndarray:
    """|g(nu)|^2 for nu = 1..m via the same incremental sweep as max_abs_over_range."""
    m = _m_of(rng)
    if isinstance(system, WeightedSystem):
        weights = system.weights
    else:
        weights = np.ones(system.n)
    return backend.sweep_abs_sq(
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(system.angles, dtype=np.float64),
        1,
        m,
    )


def pair_spectrum(system: WeightedSystem) -> RealExponentialSum:
    """The pair-difference spectrum h with |g(nu)|^2 = B2 + h(nu).

    h collects the n^2 - n off-diagonal products: coefficient b_i * b_j at
    frequency theta_i - theta_j for i != j.  Both orders of every pair are
    stored, which keeps the term list closed under frequency negation;
    coincident frequencies are deliberately not merged so all coefficients
    stay positive.
    """
    n = system.n
    if n == 1:
        return RealExponentialSum(0.0, np.empty(0), np.empty(0))
    b = system.weights
    th = system.angles
    coeff = np.outer(b, b)
    lam = np.mod(th[:, None] - th[None, :], 1.0)
    lam[lam >= 1.0] = 0.0
    off = ~np.eye(n, dtype=bool)
    return RealExponentialSum(0.0, coeff[off], lam[off])


def moments(system: WeightedSystem) -> MomentSummary:
    """Weight moments B1..B4 and the spectrum quantities A3 = B1^2 - B2, B3q = B2^2 - B4.

    Powers are built by squaring (b^4 = (b^2)^2) so that the single-weight
    case gives A3 = B3q = 0 exactly instead of float noise.
    """
    b = system.weights
    sq = b * b
    b1 = float(b.sum())
    b2 = float(sq.sum())
    b3 = float((sq * b).sum())
    b4 = float((sq * sq).sum())
    return MomentSummary(b1, b2, b3, b4, b1 * b1 - b2, b2 * b2 - b4)


def split_signs(h: RealExponentialSum, rng) -> list[tuple[int, float, float, float]]:
    """(nu, h(nu), positive part, negative part) for nu = 1..m.

    The parts are produced by branching on the sign, never by arithmetic
    reconstruction, so value = pos + neg and |value| = pos - neg hold
    exactly and pos * neg = 0 pointwise.
    """
    m = _m_of(rng)
    out = []
    for nu, v in enumerate(h.values(m), start=1):
        v = float(v)
        if v > 0.0:
            out.append((nu, v, v, 0.0))
        elif v < 0.0:
            out.append((nu, v, 0.0, v))
        else:
            out.append((nu, v, 0.0, 0.0))
    return out
