"""Expression trees: grammar, exact differentiation, printer round-trip."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spin_g.expr import (
    Const,
    Fn,
    ParseError,
    Pow,
    Prod,
    Recip,
    Sum,
    Var,
    add_,
    derivative,
    fn_,
    mul_,
    neg_,
    parse_expr,
    pow_,
    recip_,
    to_source,
)

VARS = ("x1", "x2")


def p(text, params=None):
    return parse_expr(text, VARS, params)


# -- grammar ----------------------------------------------------------------

class TestParser:
    def test_precedence_power_over_product(self):
        assert p("2*x1^3") == mul_(Const(2), pow_(Var("x1"), 3))

    def test_precedence_product_over_sum(self):
        assert p("1 + 2*x1") == add_(Const(1), mul_(Const(2), Var("x1")))

    def test_left_associative_difference(self):
        e = p("4 - x1 - x2")
        assert e.ev({"x1": 1.0, "x2": 2.0}) == 1.0

    def test_left_associative_power_chain(self):
        # x^2^3 groups as (x^2)^3
        assert p("x1^2^3") == pow_(pow_(Var("x1"), 2), 3)
        assert p("x1^2^3").ev({"x1": 2.0, "x2": 0.0}) == 64.0

    def test_unary_minus_binds_below_power(self):
        assert p("-x1^2").ev({"x1": 3.0, "x2": 0.0}) == -9.0

    def test_division_chain(self):
        e = p("12/x1/x2")
        assert e.ev({"x1": 2.0, "x2": 3.0}) == 2.0

    def test_no_implicit_multiplication(self):
        with pytest.raises(ParseError):
            p("2 x1")

    def test_decimal_literals_are_exact(self):
        assert p("0.1") == Const(Fraction(1, 10))
        assert p("2.50") == Const(Fraction(5, 2))

    def test_functions(self):
        assert p("sin(x1)") == fn_("sin", Var("x1"))
        assert p("sqrt(4)") == Const(2)

    def test_params_substitute_exactly(self):
        assert p("n/2", {"n": Fraction(3)}) == Const(Fraction(3, 2))

    def test_unknown_identifier(self):
        with pytest.raises(ParseError, match="unknown name"):
            p("y")

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as exc:
            p("x1 + + x2")
        assert exc.value.line == 1
        assert exc.value.col == 6
        assert "line 1, column 6" in str(exc.value)

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError, match="expected"):
            p("sin(x1")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            p("")

    def test_power_needs_integer_literal(self):
        with pytest.raises(ParseError):
            p("x1^x2")


# -- constructor normalizations --------------------------------------------

class TestConstructors:
    def test_add_folds_constants_first(self):
        e = add_(Var("x1"), Const(2), Const(3))
        assert e == add_(Const(5), Var("x1"))

    def test_mul_zero_annihilates(self):
        assert mul_(Const(0), Var("x1")) == Const(0)

    def test_pow_small_exponents_unwrap(self):
        assert pow_(Var("x1"), 1) == Var("x1")
        assert pow_(Var("x1"), 0) == Const(1)

    def test_pow_negative_goes_reciprocal(self):
        e = pow_(Var("x1"), -2)
        assert isinstance(e, Recip)

    def test_recip_of_const(self):
        assert recip_(Const(Fraction(2, 3))) == Const(Fraction(3, 2))
        with pytest.raises(ZeroDivisionError):
            recip_(Const(0))

    def test_fn_of_zero_const_folds(self):
        assert fn_("sin", Const(0)) == Const(0)
        assert fn_("exp", Const(0)) == Const(1)

    def test_neg_is_involution(self):
        e = add_(Var("x1"), mul_(Const(3), Var("x2")))
        assert neg_(neg_(e)) == e


# -- differentiation --------------------------------------------------------

class TestDerivative:
    def test_polynomial(self):
        e = p("x1^3 + 2*x1*x2")
        assert derivative(e, "x1") == p("3*x1^2 + 2*x2")

    def test_quotient(self):
        e = p("1/x1")
        assert derivative(e, "x1").ev({"x1": 2.0, "x2": 0.0}) == -0.25

    def test_chain_rule_through_functions(self):
        e = p("sin(x1^2)")
        d = derivative(e, "x1")
        x = 0.7
        assert d.ev({"x1": x, "x2": 0.0}) == pytest.approx(2 * x * math.cos(x * x))

    def test_mixed_partials_commute(self):
        e = p("exp(x1*x2) + x1^2/x2")
        d12 = derivative(derivative(e, "x1"), "x2")
        d21 = derivative(derivative(e, "x2"), "x1")
        env = {"x1": 0.3, "x2": 1.7}
        assert d12.ev(env) == pytest.approx(d21.ev(env), rel=1e-12)

    def test_sqrt_derivative(self):
        e = p("sqrt(x1)")
        d = derivative(e, "x1")
        assert d.ev({"x1": 4.0, "x2": 0.0}) == pytest.approx(0.25)


# -- printer round-trip ------------------------------------------------------

leaf = st.one_of(
    st.sampled_from([Var("x1"), Var("x2")]),
    st.fractions(min_value=Fraction(-6), max_value=Fraction(6), max_denominator=4).map(Const),
)


def combine(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: add_(*ab)),
        st.tuples(children, children).map(lambda ab: mul_(*ab)),
        children.map(neg_),
        st.tuples(children, st.integers(min_value=2, max_value=4)).map(
            lambda bk: pow_(bk[0], bk[1])
        ),
        children.map(lambda e: recip_(e) if e != Const(0) else Const(1)),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(
            lambda ka: fn_(ka[0], ka[1])
        ),
    )


trees = st.recursive(leaf, combine, max_leaves=12)


@settings(max_examples=400)
@given(trees)
def test_print_parse_round_trip(e):
    assert parse_expr(to_source(e), VARS) == e


@settings(max_examples=120)
@given(trees)
def test_derivative_prints_and_reparses(e):
    d = derivative(e, "x1")
    assert parse_expr(to_source(d), VARS) == d


@settings(max_examples=100)
@given(trees, trees)
def test_printed_sum_matches_constructed(e1, e2):
    s = add_(e1, e2)
    assert parse_expr(to_source(s), VARS) == s
