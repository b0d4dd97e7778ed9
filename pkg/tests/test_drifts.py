from fractions import Fraction

import sympy

from hardcore_pca.drift import drifts, fixtures
from hardcore_pca.symbolic import E0, E1, PolyQ, RatFnQ, canonical_string, parse_poly, tail

X, Y = sympy.symbols("e0 e1")
r = 1 - X - Y


def sym(q) -> sympy.Expr:
    return sympy.sympify(canonical_string(q).replace("^", "**"), locals={"e0": X, "e1": Y, "r": r})


def same(q, expr) -> bool:
    return sympy.simplify(sym(q) - expr) == 0


def test_n2_general_closed_form():
    rhs = (X / 2 + Y / 2 + Y * r + X * (1 - Y) * r / 2 + Y**2 * r / 2 + (1 - r) ** 2 / 2 + Y**2 / 2)
    assert same(drifts.drift1_n2_general() + RatFnQ(Fraction(1, 2)) - tail(2), rhs)


def test_n2_general_value():
    assert drifts.drift1_n2_general().eval_at(Fraction(1, 10), Fraction(1, 10)) == Fraction(-41, 200)


def test_s1_closed_form():
    rhs = -1 + X + 2 * Y + X**2 + 3 * Y**2 * (1 - Y) + X * Y * (1 - X) + Y**4 + X**3 * Y
    assert same(drifts.drift1_n3_S1() - tail(3), rhs)


def test_noiseless_values():
    assert drifts.drift1_n3_S1().eval_at(0, 0) == -1
    assert drifts.drift1_n2_general().eval_at(0, 0) == Fraction(-1, 2)
    assert drifts.drift2_n2_00().eval_at(0, 0) == -1


def test_one_step_expansions():
    for name in fixtures.ONE_STEP:
        got = drifts.one_step_polynomial(drifts.all_drifts()[name], 3)
        assert got == parse_poly(fixtures.ONE_STEP[name]), name


def test_two_step_expansions():
    for name in fixtures.TWO_STEP:
        got = drifts.two_step_polynomial(drifts.all_drifts()[name], 3)
        assert got == parse_poly(fixtures.TWO_STEP[name]), name


def test_two_step_markers():
    def c(name, a, b):
        return drifts.two_step_polynomial(drifts.all_drifts()[name], 3).coeff(a, b)

    assert c("drift2_n3_1000", 4, 2) == 49 and c("drift2_n3_1000", 4, 3) == -43
    assert c("drift2_n3_0000_I0", 3, 0) == 4
    assert c("drift2_n3_0000_I0", 4, 0) == -9
    # folding in the e0^3 of 2 (e0+e1)^3 from the tail gives 6 e0^3
    folded = drifts.two_step_polynomial(drifts.all_drifts()["drift2_n3_0000_I0"], 3) + PolyQ.const(2) * (E0 + E1) ** 3
    assert folded.coeff(3, 0) == 6
    assert c("drift2_n3_0000_D10", 7, 0) == 22 and c("drift2_n3_0000_D10", 7, 1) == -36


def test_diff10():
    bracket = -r**2 / 2 - 2 * X * r + X**2 * r + Y**2 / 2 + (1 - r) ** 2 / r
    rhs = (1 - r) ** 2 / 2 + Y * r / 2 + Y**2 * r / 2 + X * (1 - Y) * r / 2 + X * (sympy.Rational(3, 2) - X) * r
    assert same(drifts.drift1_n2_general(), bracket + rhs)
    assert drifts.diff10() == drifts.diff10_closed_form()


def test_n2_two_step_assembly():
    """b + p*b + (1 - p)*g with p the probability of returning to (0,0) or (*,0)."""
    b, g = drifts.drift1_n2_00_bound(), drifts.drift1_n2_general()
    p = drifts.prob_n2_00_to_00() + drifts.prob_n2_00_to_star0()
    assert drifts.drift2_n2_00() == b + p * b + (RatFnQ(1) - p) * g


def test_n2_two_step_reference_markers():
    pub = fixtures.n2_two_step_expected() - RatFnQ(2) * tail(2)
    assert pub.num.coeff(6, 0) == 1 and pub.num.coeff(5, 1) == Fraction(3, 2)
    assert pub.num.coeff(2, 2) == Fraction(-13, 2)


def test_n2_two_step_difference_is_known():
    diff = drifts.drift2_n2_00() - fixtures.n2_two_step_expected()
    assert same(diff, r * (Y**2 / 2 - X**2))


def test_two_step_noiseless():
    assert drifts.drift2_n3_1000().eval_at(0, 0) == -2
    d0, d1 = drifts.drift2_n3_0000()
    assert d0.eval_at(0, 0) == -2 and d1.eval_at(0, 0) == -2
