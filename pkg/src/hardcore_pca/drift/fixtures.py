"""Reference polynomials for the drift computations, in x = e0, y = e1.

These are the reference closed forms that the kernel sums are checked
against.  Each one-step drift equals (x+y)^n / r plus the polynomial listed;
each two-step drift equals 2 (x+y)^n / r plus the polynomial listed.  The
n = 2 two-step expansion is given in its own grouped form.
"""

from __future__ import annotations

from ..symbolic import PolyQ, RatFnQ, parse_poly, tail

ONE_STEP = {
    "drift1_n3_S1": "-1 + x + 2y + x^2 + 3y^2 - 3y^3 + xy - x^2y + y^4 + x^3y",
    "drift1_n3_1000": "-1 - x + x^2 + 2x^3 - x^4 + y + 2xy + y^2 + 2xy^2 - xy^3",
    "drift1_n3_0000_bound": "-1 - x - x^2 + 6x^3 - 3x^4 + y + 3xy + 2x^2y - 3x^3y + y^2",
}

TWO_STEP = {
    "drift2_n3_1000": (
        "-2+3x^4-x^5+3x^7-5x^8+2x^9+3y+2xy+7x^2y+11x^3y-24x^4y+12x^5y-x^6y-4x^7y"
        "+3x^8y+4y^2+3xy^2-13x^2y^2-25x^3y^2+49x^4y^2-19x^5y^2+2x^6y^2-3y^3+5xy^3"
        "+13x^2y^3+26x^3y^3-43x^4y^3+11x^5y^3-x^6y^3+y^4-15xy^4-12x^2y^4-12x^3y^4"
        "+18x^4y^4-2x^5y^4+14xy^5+10x^2y^5+2x^3y^5-3x^4y^5-6xy^6-5x^2y^6+xy^7+x^2y^7"
    ),
    "drift2_n3_0000_I0": (
        "-2+4x^3-9x^4+10x^5-3x^6+6x^7-10x^8+4x^9+3y+4xy+2x^3y+15x^4y-18x^5y+6x^6y"
        "-11x^7y+8x^8y+4y^2-10x^3y^2-7x^4y^2+15x^5y^2-4x^6y^2+3x^7y^2-3y^3+6x^2y^3"
        "+14x^3y^3-x^4y^3-8x^5y^3+y^4-9x^2y^4-11x^3y^4+x^4y^4+2x^5y^4+5x^2y^5"
        "+5x^3y^5-x^2y^6-x^3y^6"
    ),
    "drift2_n3_0000_D10": (
        "-2+4x^3-7x^4+6x^5-7x^6+22x^7-24x^8+8x^9+3y+4xy+x^3y+7x^4y+10x^6y-36x^7y"
        "+20x^8y+4y^2-5x^3y^2+5x^4y^2-15x^5y^2+12x^7y^2-3y^3+6x^2y^3+4x^3y^3"
        "-9x^4y^3+14x^5y^3-4x^6y^3+y^4-9x^2y^4-x^3y^4+3x^4y^4-4x^5y^4+5x^2y^5"
        "-x^2y^6"
    ),
}

# n = 2 two-step drift from (0,0):  -1 + 2 (x+y)^2 / r + POS - NEG
N2_TWO_STEP_POS = "x^6 + 3/2x^5y + 7/2x^4 + 6x^3y^2 + 5/2x^2y^3 + 4x^2y + 3/2x^2 + 1/2xy^5 + xy^3 + xy^2 + 5/2y"
N2_TWO_STEP_NEG = "7/2x^5 + x^4y^2 + 3/2x^4y + 2x^3y^3 + 4x^3y + 3/2x^3 + 13/2x^2y^2 + 3/2xy^4 + 1/2xy"

N2_GENERAL_AT_TENTH = "-41/200"


def n2_two_step_expected() -> RatFnQ:
    poly = PolyQ.const(-1) + parse_poly(N2_TWO_STEP_POS) - parse_poly(N2_TWO_STEP_NEG)
    return RatFnQ(poly) + RatFnQ(2) * tail(2)


def expected(name: str) -> RatFnQ:
    """Reference value of a named drift, tail included."""
    if name in ONE_STEP:
        return RatFnQ(parse_poly(ONE_STEP[name])) + tail(3)
    if name in TWO_STEP:
        return RatFnQ(parse_poly(TWO_STEP[name])) + RatFnQ(2) * tail(3)
    if name == "drift2_n2_00":
        return n2_two_step_expected()
    raise KeyError(name)


EXPECTED_NAMES = tuple(ONE_STEP) + tuple(TWO_STEP) + ("drift2_n2_00",)
