"""Near-extremal unimodular systems built from multiplicative characters mod p.

For a prime p the system z_k = chi(k) e(k/p), k = 1..p-1, with chi the
character of full order p-1, has |S(nu)| equal to sqrt(p), 1 or 0 for every
nu below p(p-1); in particular the maximum over nu = 1..n^2+n-1 (n = p-1)
is exactly sqrt(p) = sqrt(n+1).  certify() checks this numerically, value by
value, and returns a machine-checked record of the sweep.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .core import UnimodularSystem

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10**6
# deterministic Miller-Rabin witnesses, complete for q < 3.3e24 (covers 64 bits)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_CHUNK = 4096  # fixed sweep chunk so results are worker-count independent

_CLASS_TOL = 1e-8


class NotPrimeError(ValueError):
    """The argument had to be prime and is not."""


class CertificateError(RuntimeError):
    """A constructed system failed its sweep certificate."""


def is_prime(q: int) -> bool:
    """Deterministic primality verdict for 1 <= q < 2^63.

    Trial division settles everything whose square root fits under 1e6;
    beyond that, Miller-Rabin with the fixed witness set above is exact for
    the whole supported range.
    """
    q = int(q)
    if q < 2:
        return False
    for p in _SMALL_PRIMES:
        if q == p:
            return True
        if q % p == 0:
            return False
    r = math.isqrt(q)
    if r <= _TRIAL_LIMIT:
        f = 41
        while f <= r:
            if q % f == 0 or q % (f + 2) == 0:
                return False
            f += 6
        return True
    d = q - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, q)
        if x == 1 or x == q - 1:
            continue
        for _ in range(s - 1):
            x = x * x % q
            if x == q - 1:
                break
        else:
            return False
    return True


def _factorize(v: int) -> list[int]:
    """Distinct prime factors by trial division (desk scale)."""
    out = []
    d = 2
    while d * d <= v:
        if v % d == 0:
            out.append(d)
            while v % d == 0:
                v //= d
        d += 1 if d == 2 else 2
    if v > 1:
        out.append(v)
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod p (p an odd prime).

    Candidates are checked against the prime factors of p-1, so the verdict
    is exact, not probabilistic.
    """
    p = int(p)
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p < 3:
        raise ValueError("need p >= 3")
    factors = _factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def montgomery_system(p: int) -> UnimodularSystem:
    """The n = p-1 points z_k = chi(k) e(k/p) for the full-order character chi.

    chi sends g^a to e(a/(p-1)) for the smallest primitive root g, so the
    angle of z_k is the exact rational (ind(k) p + k (p-1)) / (p (p-1))
    reduced mod 1: the numerator arithmetic is integer-exact and only the
    final division rounds.  The choice of generator only permutes angles.
    """
    p = int(p)
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p < 3:
        raise ValueError("need p >= 3")
    g = primitive_root(p)
    ind = [0] * p
    x = 1
    for a in range(p - 1):  # one multiplication sweep builds the index table
        ind[x] = a
        x = x * g % p
    den = p * (p - 1)
    angles = np.empty(p - 1)
    for k in range(1, p):
        angles[k - 1] = ((ind[k] * p + k * (p - 1)) % den) / den
    return UnimodularSystem(angles)


@dataclass(frozen=True)
class ConstructionCertificate:
    """Machine-checked record that a character system attains its maximum.

    per_nu_class counts how many nu fell in each magnitude class:
    'gauss' (|S| = sqrt(p)), 'principal_nonzero' (|S| = 1), 'zero' (|S| = 0).
    """

    p: int
    n: int
    range_top: int
    observed_max: float
    theoretical_max: float
    per_nu_class: dict
    max_deviation: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "range_top": self.range_top,
            "observed_max": self.observed_max,
            "theoretical_max": self.theoretical_max,
            "per_nu_class": dict(self.per_nu_class),
            "max_deviation": self.max_deviation,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConstructionCertificate":
        return cls(
            int(d["p"]),
            int(d["n"]),
            int(d["range_top"]),
            float(d["observed_max"]),
            float(d["theoretical_max"]),
            dict(d["per_nu_class"]),
            float(d["max_deviation"]),
        )


def certify(p: int, workers: int = 1) -> ConstructionCertificate:
    """Sweep nu = 1..n^2+n-1 and certify every |S(nu)| against its class.

    Class prediction: nu divisible by p (but not p-1) gives 0, divisible by
    p-1 (but not p) gives 1, otherwise sqrt(p); both divisibilities together
    would need nu >= p(p-1), which exceeds the range top.  Any value more
    than 1e-8 away from its class raises CertificateError naming the
    offending nu.  The observed maximum must equal sqrt(p) to the same
    tolerance.

    The sweep runs in fixed-size chunks merged in order, so the certificate
    is identical for any worker count.
    """
    p = int(p)
    system = montgomery_system(p)  # raises NotPrimeError for composite p
    n = p - 1
    top = n * n + n - 1
    weights = np.ones(n)
    angles = np.ascontiguousarray(system.angles)

    starts = list(range(1, top + 1, _CHUNK))

    def run(start: int) -> np.ndarray:
        return backend.sweep_abs_sq(weights, angles, start, min(_CHUNK, top - start + 1))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    vals = np.sqrt(np.concatenate(parts))

    root_p = math.sqrt(p)
    nus = np.arange(1, top + 1)
    zero_mask = nus % p == 0
    principal_mask = (nus % (p - 1) == 0) & ~zero_mask
    gauss_mask = ~zero_mask & ~principal_mask
    targets = np.where(zero_mask, 0.0, np.where(principal_mask, 1.0, root_p))
    devs = np.abs(vals - targets)
    worst = int(devs.argmax())
    if devs[worst] > _CLASS_TOL:
        raise CertificateError(
            f"certificate violation at nu = {worst + 1}: |S| = {vals[worst]!r} "
            f"deviates {devs[worst]:.3e} from its class value {targets[worst]!r}"
        )
    observed = float(vals.max())
    if abs(observed - root_p) > _CLASS_TOL:
        raise CertificateError(
            f"certificate violation: observed max {observed!r} is not sqrt({p})"
        )
    counts = {
        "gauss": int(gauss_mask.sum()),
        "principal_nonzero": int(principal_mask.sum()),
        "zero": int(zero_mask.sum()),
    }
    return ConstructionCertificate(
        p, n, top, observed, root_p, counts, float(devs[worst])
    )
