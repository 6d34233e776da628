"""Closed-form bound formulas, their identities and the best-bound selector."""
import math
from fractions import Fraction

import numpy as np
import pytest

from powersum import (
    Formula,
    best_lower_bound,
    ceil_envelope,
    classical_bounds,
    corollary1,
    corollary2,
    corollary3,
    is_prime,
    phi,
    pure_moments,
    theorem3_bounds,
    theorem4,
)


class TestTheorem3:
    def test_pure_n2_m5(self):
        # exact rational oracle: 2 + 2*(6/5)/4 - 8/20 = 11/5
        i0, _ = theorem3_bounds(pure_moments(2), 5)
        assert i0.squared
        assert i0.value == pytest.approx(float(Fraction(11, 5)), abs=1e-14)
        # equals corollary1(i) on the pure case
        assert i0.value == pytest.approx(corollary1(2, 5)[0].value, abs=1e-14)

    def test_single_point(self):
        i0, _ = theorem3_bounds(pure_moments(1), 12)
        assert i0.value == pytest.approx(1.0, abs=1e-14)

    def test_pure_n3_m27(self):
        _, i1 = theorem3_bounds(pure_moments(3), 27)
        assert i1.applicable
        assert i1.value == pytest.approx(float(Fraction(77, 19)), abs=1e-12)

    def test_condition_reporting(self):
        _, i1 = theorem3_bounds(pure_moments(4), 3)  # m far below n^2
        assert not i1.applicable
        assert any(name == "denominator positive" and not ok for name, ok in i1.conditions)


class TestCorollary1:
    def test_examples(self):
        i, _ = corollary1(2, 4)
        assert i.value == pytest.approx(2.125, abs=1e-14)
        _, ii = corollary1(3, 27)
        assert ii.applicable
        assert ii.value == pytest.approx(float(Fraction(77, 19)), abs=1e-12)
        i, _ = corollary1(1, 100)
        assert i.value == pytest.approx(1.0, abs=1e-14)

    def test_ii_needs_m_beyond_n_squared(self):
        _, ii = corollary1(3, 9)
        assert not ii.applicable
        _, ii = corollary1(1, 50)
        assert not ii.applicable and math.isnan(ii.value)

    def test_matches_exact_rationals(self):
        for n in range(2, 12):
            for m in (n * n, 2 * n * n, 4 * n * n + 3):
                i, ii = corollary1(n, m)
                exact_i = n + Fraction((n - 1) * (1 + m - n * n), 2 * m)
                assert i.value == pytest.approx(float(exact_i), rel=1e-14)
                exact_ii = 2 * n - Fraction(
                    2 * (1 + m - 2 * n * n + n**3), (n - 1) * (1 + m - n * n)
                )
                assert ii.value == pytest.approx(float(exact_ii), rel=1e-13)


class TestTheorem4:
    def test_examples(self):
        assert theorem4(2, 0).value == pytest.approx(math.sqrt(17 / 8), abs=1e-14)
        assert theorem4(2, 0).value == pytest.approx(1.457738, abs=5e-7)
        assert theorem4(5, 0).value == pytest.approx(math.sqrt(5.08), abs=1e-14)
        assert theorem4(1, 7).value == pytest.approx(1.0, abs=1e-14)

    def test_equals_sqrt_corollary1_i(self):
        for n in (2, 3, 7):
            for j in (0, 5, 3 * n * n):
                t4 = theorem4(n, j)
                c1 = corollary1(n, n * n + j)[0]
                assert not t4.squared and c1.squared
                assert t4.value == pytest.approx(math.sqrt(c1.value), rel=1e-15)

    def test_identity_with_corollary2(self):
        # n + (n-1)/(2n^2) = n + 1/(2n) - 1/(2n^2), checked through the sqrt
        for n in range(1, 1001):
            assert abs(theorem4(n, 0).value - corollary2(n).value) <= 1e-14

    def test_squared_bound_increasing_in_j(self):
        for n in range(2, 11):
            prev = -math.inf
            for j in range(0, 10 * n * n + 1, max(1, n * n // 2)):
                cur = theorem4(n, j).value ** 2
                assert cur > prev
                prev = cur


class TestCorollary2:
    def test_examples(self):
        assert corollary2(2).value == pytest.approx(math.sqrt(17 / 8), abs=1e-15)
        assert corollary2(1).value == pytest.approx(1.0, abs=1e-15)
        assert corollary2(5).value == pytest.approx(math.sqrt(5.08), abs=1e-15)
        assert corollary2(5).range_top == 25


class TestCorollary3:
    def test_n4(self):
        lower, upper = corollary3(4)
        assert lower.value == pytest.approx(2.077447826946374, abs=1e-12)
        assert upper.applicable
        assert upper.value == pytest.approx(math.sqrt(5), abs=1e-15)
        assert lower.range_top == upper.range_top == 19

    def test_n2(self):
        lower, upper = corollary3(2)
        assert lower.value == pytest.approx(math.sqrt(2.2), abs=1e-14)
        assert upper.value == pytest.approx(math.sqrt(3), abs=1e-15)

    def test_prime_guard(self):
        _, upper = corollary3(7)  # 8 is composite
        assert not upper.applicable
        assert ("n + 1 prime", False) in upper.conditions

    def test_lower_below_upper_for_all_applicable_n(self):
        for n in range(1, 10_001):
            if is_prime(n + 1):
                lower, upper = corollary3(n)
                assert lower.value <= upper.value


class TestPhiAndEnvelope:
    def test_values(self):
        assert phi(2.0) == pytest.approx(1.25, abs=1e-15)
        assert phi(1.0) == pytest.approx(1.0, abs=1e-15)
        assert phi(3.0) == pytest.approx(4 / 3, abs=1e-15)
        # both branches meet at the breakpoint
        assert phi(3.0 - 1e-12) == pytest.approx(phi(3.0 + 1e-12), abs=1e-11)

    def test_limit(self):
        assert phi(1e6) > 2 - 3e-6

    def test_domain(self):
        with pytest.raises(ValueError, match="alpha out of domain"):
            phi(0.99)

    def test_envelope(self):
        assert ceil_envelope(2.0) == pytest.approx(math.sqrt(2), abs=1e-15)
        assert ceil_envelope(1.0) == 1.0
        assert ceil_envelope(3.5) == 2.0


class TestClassicalBounds:
    def test_andersson_full_inner_parameter(self):
        # q = n = 4: range 1..(2*4*4 - 4*5 + 1) = 1..13, value 2
        rows = {r.formula: r for r in classical_bounds(4, 13)}
        a = rows[Formula.Andersson]
        assert a.applicable and a.inputs["q"] == 4
        assert a.range_top == 13
        assert a.value == pytest.approx(2.0, abs=1e-15)

    def test_cns_value(self):
        rows = {r.formula: r for r in classical_bounds(5, 100, c=2.0)}
        cns = rows[Formula.CNS]
        assert cns.value == pytest.approx(math.sqrt(3), abs=1e-15)
        assert cns.range_top == 10

    def test_single_point(self):
        rows = {r.formula: r for r in classical_bounds(1, 1)}
        t = rows[Formula.Turan]
        assert t.applicable and t.value == 1.0 and t.range_top == 1

    def test_ranges_gate_applicability(self):
        rows = {r.formula: r for r in classical_bounds(10, 5)}
        assert not rows[Formula.Turan].applicable
        assert not rows[Formula.Andersson].applicable


class TestBestLowerBound:
    def test_n2_m4(self):
        best = best_lower_bound(2, 4)
        assert best.formula == Formula.C1i
        assert best.value == pytest.approx(math.sqrt(2.125), abs=1e-14)
        # beats the comparison bounds it was up against
        assert best.value > 1.0
        assert best.value > math.sqrt(1.5)  # CNS at c = m/n = 2

    def test_n3_m27(self):
        best = best_lower_bound(3, 27)
        assert best.formula == Formula.C1ii
        assert best.value == pytest.approx(math.sqrt(77 / 19), abs=1e-13)

    def test_single_point(self):
        assert best_lower_bound(1, 10).value == pytest.approx(1.0, abs=1e-14)

    def test_never_below_any_candidate(self):
        rng = np.random.default_rng(55)
        for _ in range(40):
            n = int(rng.integers(1, 12))
            m = int(rng.integers(1, 500))
            best = best_lower_bound(n, m)
            i, ii = corollary1(n, m)
            assert best.value >= i.reported_value() - 1e-12
            if ii.applicable:
                assert best.value >= ii.reported_value() - 1e-12


class TestAsymptotics:
    def test_c1i_tracks_first_phi_branch(self):
        # sqrt(C1i(n, alpha n^2))/sqrt(n) stays within 2/n of sqrt(3/2 - 1/(2 alpha))
        n = 200
        for alpha in (1, 1.5, 2, 3, 5, 10):
            m = int(alpha * n * n)
            lhs = corollary1(n, m)[0].reported_value() / math.sqrt(n)
            rhs = math.sqrt(1.5 - 0.5 / alpha)
            assert abs(lhs - rhs) / rhs <= 2.0 / n

    def test_c1ii_tracks_its_own_limit(self):
        # the printed second bound behaves like 2n - 2/(alpha-1) for fixed
        # alpha > 1, approaching the sqrt(2) envelope from below
        n = 200
        for alpha in (1.5, 2, 3, 5, 10):
            m = int(alpha * n * n)
            val = corollary1(n, m)[1].value
            predicted = 2 * n - 2 / (alpha - 1)
            assert abs(val - predicted) <= 12.0  # O(1) window around the limit
            assert val < 2 * n

    def test_first_bound_nonnegative_from_n_squared_minus_one(self):
        # the nonnegativity promise covers the first bound; the second can dip
        # below zero while applicable (e.g. n=2, m=5 gives -2)
        for n in range(1, 15):
            for m in (max(1, n * n - 1), n * n, 3 * n * n):
                assert corollary1(n, m)[0].value >= 0.0
                assert theorem3_bounds(pure_moments(n), m)[0].value >= 0.0
        assert corollary1(2, 5)[1].value == pytest.approx(-2.0, abs=1e-13)


class TestBoundResultContract:
    def test_inapplicable_needs_failed_condition(self):
        from powersum import BoundResult

        with pytest.raises(ValueError):
            BoundResult(1.0, False, Formula.T4, applicable=False)

    def test_sqrt_only_at_reporting(self):
        from powersum import BoundResult

        r = BoundResult(4.0, True, Formula.C1i)
        assert r.value == 4.0
        assert r.reported_value() == 2.0
        r = BoundResult(-3.0, True, Formula.C1i)
        assert r.reported_value() == 0.0
