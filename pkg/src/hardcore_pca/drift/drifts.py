"""One- and two-step drifts of the modified right offset, as exact rational functions.

All values are functions of (e0, e1).  Two-step drifts condition on the class
reached after the first step and plug in the one-step drift of that class;
where a class only has a lower bound, the bound is used.
"""

from __future__ import annotations

from fractions import Fraction

from ..symbolic import E0, E1, R, RatFnQ, tail
from .kernels import Kernel, kernel_n2_00, kernel_n2_general, kernel_n3_0000, kernel_n3_1000, kernel_n3_S1

x, y, r = E0, E1, R
half = Fraction(1, 2)


def drift1(kernel: Kernel) -> RatFnQ:
    return kernel.drift1()


# --- n = 2 ------------------------------------------------------------------

def drift1_n2_general() -> RatFnQ:
    """Exact one-step drift from (0,1), (1,0) or (1,1)."""
    return kernel_n2_general().drift1()


def drift1_n2_general_closed_form() -> RatFnQ:
    """Same quantity, written as a sum of grouped terms (independent check)."""
    return (
        RatFnQ(-half + half * x + half * y + y * r + half * x * (1 - y) * r
               + half * y ** 2 * r + half * (x + y) ** 2 + half * y ** 2)
        + tail(2)
    )


def drift1_n2_00_bound() -> RatFnQ:
    """Lower bound on the one-step drift from (0,0)."""
    return kernel_n2_00().drift1()


def drift1_n2_00_bound_closed_form() -> RatFnQ:
    return RatFnQ(-half * r ** 2 - 2 * x * r + x ** 2 * r + half * y ** 2) + tail(2)


def prob_n2_00_to_00() -> RatFnQ:
    return kernel_n2_00().class_marginals()["00"]


def prob_n2_00_to_star0() -> RatFnQ:
    return kernel_n2_00().class_marginals()["*0"]


def drift2_n2_00() -> RatFnQ:
    """Lower bound on the two-step drift from (0,0).

    After (0,0) or (*,0) the second step uses the (0,0) bound, which also
    bounds the (1,0) drift from below; every other class uses the exact
    general drift.
    """
    b = drift1_n2_00_bound()
    g = drift1_n2_general()
    p = prob_n2_00_to_00() + prob_n2_00_to_star0()
    return b + p * b + (1 - p) * g


def diff10() -> RatFnQ:
    """General drift minus the (0,0) bound; nonnegative on the unit square."""
    return drift1_n2_general() - drift1_n2_00_bound()


def diff10_closed_form() -> RatFnQ:
    return RatFnQ(
        half * (x + y) ** 2 + half * y * r + half * y ** 2 * r
        + half * x * (1 - y) * r + x * (Fraction(3, 2) - x) * r
    )


# --- n = 3 ------------------------------------------------------------------

def drift1_n3_S1() -> RatFnQ:
    return kernel_n3_S1().drift1()


def drift1_n3_1000() -> RatFnQ:
    return kernel_n3_1000().drift1()


def drift1_n3_0000_bound() -> RatFnQ:
    return kernel_n3_0000().drift1()


def marginals_from_1000() -> dict[str, RatFnQ]:
    m = kernel_n3_1000().class_marginals()
    return {"S1": m["S1"], "1000": m["1000"], "0000": m["0000"]}


def marginals_from_0000() -> dict[str, RatFnQ]:
    """Grouped as: S1; 1000 together with 1*00; 0000; *000 together with E*."""
    m = kernel_n3_0000().class_marginals()
    return {
        "S1": m["S1"],
        "1000|1*00": m["1000"] + m["1*00"],
        "0000": m["0000"],
        "*000|E*": m["*000"] + m["E*"],
    }


def drift2_n3_1000() -> RatFnQ:
    dS1, d10, i0 = drift1_n3_S1(), drift1_n3_1000(), drift1_n3_0000_bound()
    p = marginals_from_1000()
    return d10 + p["S1"] * dS1 + p["1000"] * d10 + p["0000"] * i0


def drift2_n3_0000() -> tuple[RatFnQ, RatFnQ]:
    """Two-step bounds from 0000 under the two orderings of I0 and the 1000 drift.

    Returns (D0, D1): D0 plugs I0 into the undetermined classes, D1 plugs the
    1000 drift.  The valid bound is whichever corresponds to min(I0, D10).
    """
    dS1, d10, i0 = drift1_n3_S1(), drift1_n3_1000(), drift1_n3_0000_bound()
    q = marginals_from_0000()
    base = i0 + q["0000"] * i0 + q["S1"] * dS1 + q["1000|1*00"] * d10
    return base + q["*000|E*"] * i0, base + q["*000|E*"] * d10


def two_step_polynomial(d2: RatFnQ, n: int):
    """Remove the 2*(e0+e1)^(n)/r tail and return the polynomial part."""
    rest = d2 - RatFnQ(2) * tail(n)
    if rest.rpow != 0:
        raise ValueError("two-step drift minus its tail is not a polynomial")
    return rest.num


def one_step_polynomial(d1: RatFnQ, n: int):
    rest = d1 - tail(n)
    if rest.rpow != 0:
        raise ValueError("one-step drift minus its tail is not a polynomial")
    return rest.num


def all_drifts() -> dict[str, RatFnQ]:
    d0, d1 = drift2_n3_0000()
    return {
        "drift1_n2_general": drift1_n2_general(),
        "drift1_n2_00_bound": drift1_n2_00_bound(),
        "drift2_n2_00": drift2_n2_00(),
        "drift1_n3_S1": drift1_n3_S1(),
        "drift1_n3_1000": drift1_n3_1000(),
        "drift1_n3_0000_bound": drift1_n3_0000_bound(),
        "drift2_n3_1000": drift2_n3_1000(),
        "drift2_n3_0000_I0": d0,
        "drift2_n3_0000_D10": d1,
    }
