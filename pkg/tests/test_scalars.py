"""Exact scalar tower: rationals extended by square roots and pi powers."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spin_g.scalars import (
    PI,
    ExactnessError,
    Scalar,
    cos_exact,
    sin_exact,
    squarefree_decompose,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)


def sqrt2():
    return Scalar.sqrt_rational(2)


class TestConstruction:
    def test_of_int_and_fraction(self):
        assert Scalar.of(3).as_fraction() == 3
        assert Scalar.of(Fraction(-7, 2)).as_fraction() == Fraction(-7, 2)

    def test_of_rejects_float(self):
        with pytest.raises(TypeError):
            Scalar.of(0.5)

    def test_zero_default(self):
        assert Scalar().is_zero()
        assert not Scalar.of(1).is_zero()

    def test_sqrt_rational_squares_back(self):
        for q in (2, 3, Fraction(1, 2), Fraction(9, 5), 12):
            r = Scalar.sqrt_rational(q)
            assert r * r == Scalar.of(Fraction(q))

    def test_sqrt_rational_negative(self):
        with pytest.raises(ExactnessError):
            Scalar.sqrt_rational(-1)

    def test_squarefree_decompose(self):
        # n = m^2 * d with d squarefree
        assert squarefree_decompose(8) == (2, 2)
        assert squarefree_decompose(12) == (2, 3)
        assert squarefree_decompose(7) == (1, 7)
        assert squarefree_decompose(1) == (1, 1)

    def test_sqrt8_collapses_to_2_sqrt2(self):
        assert Scalar.sqrt_rational(8) == Scalar.of(2) * sqrt2()


class TestFieldOps:
    @given(rationals, rationals, rationals)
    def test_ring_axioms_on_rationals(self, a, b, c):
        x, y, z = Scalar.of(a), Scalar.of(b), Scalar.of(c)
        assert (x + y) + z == x + (y + z)
        assert x + y == y + x
        assert x * (y + z) == x * y + x * z
        assert (x * y) * z == x * (y * z)

    @given(rationals)
    def test_additive_inverse(self, a):
        x = Scalar.of(a)
        assert (x + (-x)).is_zero()

    @given(rationals)
    def test_division_roundtrip(self, a):
        x = Scalar.of(a)
        if x.is_zero():
            with pytest.raises(ZeroDivisionError):
                Scalar.of(1) / x
        else:
            assert (Scalar.of(1) / x) * x == 1

    def test_inverse_in_quadratic_extension(self):
        x = Scalar.of(3) + Scalar.of(2) * sqrt2()
        assert x * x.inverse() == 1

    def test_inverse_in_biquadratic_extension(self):
        x = Scalar.of(1) + sqrt2() + Scalar.sqrt_rational(3)
        assert x * x.inverse() == 1

    def test_no_inverse_for_pi_sums(self):
        with pytest.raises(ExactnessError):
            (Scalar.of(1) + PI).inverse()

    def test_single_pi_monomial_divides(self):
        assert (PI * 6) / (PI * 2) == 3

    def test_negative_pi_power_rejected(self):
        with pytest.raises(ExactnessError):
            Scalar.of(1) / PI


class TestQueries:
    def test_as_fraction_rejects_irrational(self):
        with pytest.raises(ExactnessError):
            sqrt2().as_fraction()

    def test_sign_certification_on_close_mixed_terms(self):
        # 99/70 is a convergent of sqrt(2): the difference is ~1e-4 but certified
        near = Scalar.of(Fraction(99, 70)) - sqrt2()
        assert near.sign() == 1
        assert (-near).sign() == -1
        assert (sqrt2() - Scalar.of(Fraction(7, 5))).sign() > 0

    def test_pi_beats_rational_bound(self):
        assert (PI - Scalar.of(Fraction(22, 7))).sign() == -1
        assert (PI - Scalar.of(3)).sign() == 1

    def test_comparisons(self):
        assert Scalar.of(1) < sqrt2() < Scalar.of(2)
        assert PI > 3

    def test_float_conversion(self):
        assert math.isclose(float(sqrt2() * PI), math.sqrt(2) * math.pi)

    def test_sqrt_of_even_pi_power(self):
        s = (PI * PI * 4).sqrt()
        assert s == PI * 2

    def test_sqrt_refuses_nested_radical(self):
        with pytest.raises(ExactnessError):
            (Scalar.of(1) + sqrt2()).sqrt()

    @given(rationals)
    def test_hash_eq_consistency(self, a):
        assert hash(Scalar.of(a)) == hash(Fraction(a))


class TestTrigTable:
    def test_quarter_turns(self):
        assert cos_exact(Scalar()) == 1
        assert cos_exact(PI) == -1
        assert sin_exact(PI / 2) == 1
        assert sin_exact(PI) == 0

    def test_twelfths(self):
        assert cos_exact(PI / 3) == Fraction(1, 2)
        assert cos_exact(PI / 6) == Scalar.sqrt_rational(3) / 2
        assert sin_exact(PI / 4) == Scalar.sqrt_rational(2) / 2
        assert cos_exact(PI / 12) == (Scalar.sqrt_rational(6) + Scalar.sqrt_rational(2)) / 4

    def test_periodicity_and_parity(self):
        for p in range(-24, 25):
            a = PI * Fraction(p, 12)
            assert cos_exact(a) == cos_exact(-a)
            assert sin_exact(a) == -sin_exact(-a)
            assert cos_exact(a + 2 * PI) == cos_exact(a)

    @settings(max_examples=30)
    @given(st.integers(min_value=-30, max_value=30))
    def test_pythagorean_identity(self, p):
        a = PI * Fraction(p, 12)
        c, s = cos_exact(a), sin_exact(a)
        assert c * c + s * s == 1

    def test_unsupported_angle(self):
        with pytest.raises(ExactnessError):
            cos_exact(PI / 5)
        with pytest.raises(ExactnessError):
            cos_exact(Scalar.of(1))
