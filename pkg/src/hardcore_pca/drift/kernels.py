"""Boundary transition kernels for the right edge of a decorrelated island.

Each kernel maps the current boundary class to a list of (increment of the
modified position, next class, probability) entries.  Geometric families
stand for the infinitely many entries

    delta + k   with probability   prob * (1 - r)**k,   k = 0, 1, 2, ...

and are summed in closed form.  Entries whose increment is only known from
below (the next boundary contains a forgotten cell) carry ``lower_bound``.

Class labels:
    n = 2:  "00", "01", "10", "11", plus "*0", "*1" (first cell forgotten)
    n = 3:  "0000", "1000", "S1", plus "*000", "1*00", "E*"
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..symbolic import E0, E1, ONE, R, RatFnQ, geom_mass, geom_sum, poly_sum

x, y, r = E0, E1, R
s = E0 + E1  # 1 - r

N2_GENERAL = ("01", "10", "11")
N3_S1 = tuple(
    f"{a0}{a1}{a2}{a3}"
    for a0 in "01" for a1 in "01" for a2 in "01" for a3 in "01"
    if "1" in f"{a1}{a2}{a3}"
)


@dataclass(frozen=True)
class KernelEntry:
    delta: Fraction
    next_class: str
    prob: RatFnQ
    lower_bound: bool = False
    family: bool = False  # geometric family in k >= 0, ratio (1 - r)
    label: str = ""

    def mass(self) -> RatFnQ:
        if self.family:
            return geom_mass(self.prob / RatFnQ(r))
        return self.prob

    def mean_increment(self) -> RatFnQ:
        if self.family:
            return geom_sum(self.delta, self.prob / RatFnQ(r))
        return self.prob * self.delta

    def terms(self, upto: int):
        """Concrete (delta, prob) pairs; families truncated after ``upto`` terms."""
        if not self.family:
            yield self.delta, self.prob
            return
        for k in range(upto):
            yield self.delta + k, self.prob * RatFnQ(s ** k)


@dataclass
class Kernel:
    source_class: str
    n: int
    entries: list[KernelEntry] = field(default_factory=list)

    def add(self, delta, next_class, prob, *, lower_bound=False, family=False, label=""):
        self.entries.append(
            KernelEntry(Fraction(delta), next_class, RatFnQ.coerce(prob), lower_bound, family, label)
        )

    @property
    def has_lower_bound(self) -> bool:
        return any(e.lower_bound for e in self.entries)

    def mass(self) -> RatFnQ:
        return poly_sum(e.mass() for e in self.entries)

    def drift1(self) -> RatFnQ:
        """Mean increment; a lower bound when ``has_lower_bound``."""
        return poly_sum(e.mean_increment() for e in self.entries)

    def class_marginals(self) -> dict[str, RatFnQ]:
        out: dict[str, RatFnQ] = {}
        for e in self.entries:
            out[e.next_class] = out.get(e.next_class, RatFnQ()) + e.mass()
        return out


# --- n = 2 ------------------------------------------------------------------

def kernel_n2_general() -> Kernel:
    """Boundary (X_{j-1}, X_j) in {(0,1), (1,0), (1,1)}: all three share this law."""
    k = Kernel("01/10/11", 2)
    half = Fraction(1, 2)
    k.add(-1, "10", y * (1 - y) * r)
    k.add(-half, "00", (1 - y) ** 2 * r)
    k.add(0, "01", (1 - y) * y * r)
    k.add(0, "11", y ** 2 * r)
    k.add(0, "10", y * x * r)
    k.add(half, "00", (1 - y) * x * r)
    k.add(1, "01", (1 - y) * y * r)
    k.add(1, "11", y ** 2 * r)
    k.add(1, "10", y * x * r, family=True)
    k.add(Fraction(3, 2), "00", x ** 2 * r, family=True)
    k.add(2, "01", x * y * r, family=True)
    k.add(2, "11", y ** 2 * r, family=True)
    return k


def kernel_n2_00() -> Kernel:
    """Boundary (0, 0); the (*,0) line keeps only the smaller possible increment."""
    k = Kernel("00", 2)
    half = Fraction(1, 2)
    k.add(-Fraction(3, 2), "*0", x * r ** 2, lower_bound=True)
    k.add(-Fraction(3, 2), "10", y * x * r)
    k.add(-1, "00", x ** 2 * r)
    k.add(-half, "01", x * (1 - x) * r)
    k.add(-half, "11", y * (1 - x) * r)
    k.add(-half, "*1", r * (1 - x) * r)
    k.add(-half, "10", (1 - x) * x * r)
    k.add(0, "00", x ** 2 * r)
    k.add(half, "01", x * y * r)
    k.add(half, "11", (1 - x) * y * r)
    k.add(half, "10", y * x * r, family=True)
    k.add(1, "00", x ** 2 * r, family=True)
    k.add(Fraction(3, 2), "01", x * y * r, family=True)
    k.add(Fraction(3, 2), "11", y ** 2 * r, family=True)
    return k


# --- n = 3 ------------------------------------------------------------------

def kernel_n3_S1() -> Kernel:
    """Boundary in S1 (a 1 among the last three cells).

    Only the last three cells of the next boundary are followed; lines ending in
    (0,0,0) go to "*000", whose first cell is not determined here.
    """
    k = Kernel("S1", 3)
    for kk in range(3):
        k.add(-1 + kk, "*000", (1 - y) ** (3 - kk) * x ** kk * r)
    k.add(2, "*000", x ** 3 * r, family=True)
    for l in range(3):
        for kk in range(l + 1):
            k.add(-l + kk, "S1", y * (1 - y) ** (l - kk) * x ** kk * r)
    for l in range(2):
        for kk in range(l + 1, 3):
            k.add(-l + kk, "S1", s ** (kk - l - 1) * y * x ** l * r)
    for l in range(3):
        k.add(3 - l, "S1", s ** (2 - l) * y * x ** l * r, family=True)
    return k


def kernel_n3_1000() -> Kernel:
    """Boundary (1, 0, 0, 0)."""
    k = Kernel("1000", 3)
    for kk in range(4):
        k.add(-2 + kk, "0000", (1 - y) ** (3 - kk) * x ** (1 + kk) * r)
    for kk in range(3):
        k.add(-2 + kk, "1000", y * (1 - y) ** (2 - kk) * x ** (1 + kk) * r)
    k.add(1, "1000", (1 - x) * x ** 3 * r)
    for l in (1, 2):
        for kk in range(l):
            k.add(-1 + kk - l, "S1", x ** (kk + 1) * y * (1 - y) ** (l - kk - 1) * r)
    for l in range(3):
        k.add(-1, "S1", (1 - x) * x ** l * r)
    for l in range(3):
        for kk in range(l + 1, 4):
            k.add(-1 + kk - l, "S1", s ** (kk - l - 1) * y * x ** l * r)
    k.add(2, "0000", x ** 4 * r, family=True)
    k.add(2, "1000", y * x ** 3 * r, family=True)
    for l in range(3):
        k.add(3 - l, "S1", s ** (3 - l) * y * x ** l * r, family=True)
    return k


def kernel_n3_0000() -> Kernel:
    """Boundary (0, 0, 0, 0); lines into "1*00" and "E*" only bound the increment."""
    k = Kernel("0000", 3)
    k.add(-3, "1*00", y * r * x ** 2 * r, lower_bound=True)
    k.add(-3, "E*", (1 - y) * r * x ** 2 * r, lower_bound=True)
    for kk in range(2):
        k.add(-2 + kk, "*000", r * x ** 3 * r)
    k.add(-3, "S1", y * x ** 2 * r)
    k.add(-2, "S1", (1 - x) * x ** 2 * r)
    for kk in range(4):
        k.add(-2 + kk, "0000", x ** 4 * r)
    for kk in range(2):
        k.add(-2 + kk, "1000", y * x ** 3 * r)
    for kk in (2, 3):
        k.add(-2 + kk, "1000", (1 - x) * x ** 3 * r)
    k.add(-1, "S1", (1 - x) * r)
    k.add(0, "S1", y * r)
    k.add(-2, "S1", (1 - x) * x * r)
    k.add(-1, "S1", (1 - x) * x * r)
    for kk in range(2):
        k.add(1 + kk, "S1", s ** (kk + 1) * y * r)
    for kk in range(2):
        k.add(kk, "S1", s ** kk * y * x * r)
    k.add(-1, "S1", (1 - x) * x ** 2 * r)
    k.add(0, "S1", y * x ** 2 * r)
    k.add(2, "0000", x ** 4 * r, family=True)
    k.add(2, "1000", y * x ** 3 * r, family=True)
    for l in range(3):
        k.add(3 - l, "S1", s ** (3 - l) * y * x ** l * r, family=True)
    return k


KERNELS = {
    "n2_general": kernel_n2_general,
    "n2_00": kernel_n2_00,
    "n3_S1": kernel_n3_S1,
    "n3_1000": kernel_n3_1000,
    "n3_0000": kernel_n3_0000,
}


def all_kernels() -> dict[str, Kernel]:
    return {name: make() for name, make in KERNELS.items()}


ONE_Q = RatFnQ(ONE)
