"""Replayable positivity certificates and an exact grid scan.

A certificate shows that ``target - floor > 0`` on the box [0, 1/2]^2 minus
the origin.  The expression is split as

    poly(e0, e1) + d * (e0 + e1)^p / r,        d >= 0,

and a list of steps is replayed.  Each step removes from ``poly`` a piece that
is known to be nonnegative on the box:

    dominate  c_a * m_a - c * m_b   with m_a | m_b.  At scale "unit" c_a = c,
              valid on [0,1]^2.  At scale "half" c_a = c / 2^(deg m_b - deg m_a),
              valid on [0,1/2]^2.
    square    c * (m_1 - m_2)^2  with c >= 0.
    tail      rewrite d (e0+e1)^p / r as d * sum_{k=p}^{K} (e0+e1)^k plus
              d (e0+e1)^(K+1) / r, moving the finite part into ``poly``.

The replay passes when every remaining coefficient is >= 0 and strict
positivity is witnessed, either by a retained tail with d > 0 or by a positive
pure power of e0 together with a positive pure power of e1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ..symbolic import E0, E1, PolyQ, RatFnQ, canonical_string, tail

Exp = tuple[int, int]


class CertificateGap(Exception):
    """Replay left a negative coefficient; ``term`` is the first one found."""

    def __init__(self, term: Exp, coeff: Fraction, remainder: PolyQ):
        self.term = term
        self.coeff = coeff
        self.remainder = remainder
        mono = canonical_string(PolyQ({term: coeff}))
        super().__init__(f"unabsorbed negative term {mono}")


class CertificateMismatch(ValueError):
    """The target does not have the declared tail shape."""


@dataclass
class Certificate:
    name: str
    target: str  # name of the expression in the registry
    floor: Fraction
    tail_power: int
    tail_coeff: Fraction
    steps: list[dict] = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "target": self.target,
            "floor": str(self.floor),
            "tail_power": self.tail_power,
            "tail_coeff": str(self.tail_coeff),
            "steps": self.steps,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        return cls(
            name=d["name"],
            target=d["target"],
            floor=Fraction(d["floor"]),
            tail_power=int(d["tail_power"]),
            tail_coeff=Fraction(d["tail_coeff"]),
            steps=list(d["steps"]),
            note=d.get("note", ""),
        )

    @classmethod
    def load(cls, path) -> "Certificate":
        return cls.from_json(json.loads(Path(path).read_text()))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")


@dataclass
class Replay:
    remainder: PolyQ
    tail_power: int
    tail_coeff: Fraction
    half_box: bool  # True when some step is only valid on [0,1/2]^2
    pieces: list[str]

    def witness(self) -> bool:
        if self.tail_coeff > 0:
            return True
        pure0 = any(c > 0 and a[1] == 0 and a[0] > 0 for a, c in self.remainder.items())
        pure1 = any(c > 0 and a[0] == 0 and a[1] > 0 for a, c in self.remainder.items())
        return pure0 and pure1

    def first_negative(self):
        for a, c in self.remainder.items():
            if c < 0:
                return a, c
        return None


def mono(a: Exp) -> PolyQ:
    return PolyQ({tuple(a): Fraction(1)})


def split_tail(expr: RatFnQ, p: int, d: Fraction) -> PolyQ:
    """Return poly with expr == poly + d * tail(p), or raise."""
    rest = expr - RatFnQ(d) * tail(p)
    if rest.rpow != 0:
        raise CertificateMismatch(f"expression minus {d}*(e0+e1)^{p}/r is not a polynomial")
    return rest.num


def replay(expr: RatFnQ, cert: Certificate) -> Replay:
    """Apply the certificate steps to ``expr - floor`` without judging the result."""
    poly = split_tail(expr - RatFnQ(cert.floor), cert.tail_power, cert.tail_coeff)
    p, d = cert.tail_power, cert.tail_coeff
    half_box = False
    pieces: list[str] = []
    for st in cert.steps:
        kind = st["kind"]
        if kind == "dominate":
            a, b = tuple(st["pos"]), tuple(st["neg"])
            if not (a[0] <= b[0] and a[1] <= b[1]) or a == b:
                raise CertificateMismatch(f"{a} does not properly divide {b}")
            c = Fraction(st["coeff"])
            if c < 0:
                raise CertificateMismatch("dominate step with negative coefficient")
            scale = st.get("scale", "unit")
            if scale == "unit":
                ca = c
            elif scale == "half":
                ca = c / 2 ** ((b[0] + b[1]) - (a[0] + a[1]))
                half_box = True
            else:
                raise CertificateMismatch(f"unknown scale {scale!r}")
            piece = PolyQ({a: ca}) - PolyQ({b: c})
        elif kind == "square":
            c = Fraction(st["coeff"])
            if c < 0:
                raise CertificateMismatch("square step with negative coefficient")
            piece = PolyQ.const(c) * (mono(st["m1"]) - mono(st["m2"])) ** 2
        elif kind == "tail":
            upto = int(st["upto"])
            if upto < p:
                raise CertificateMismatch("tail expansion must not go backwards")
            s = E0 + E1
            finite = sum((s ** k for k in range(p, upto + 1)), PolyQ())
            poly = poly + PolyQ.const(d) * finite
            pieces.append(f"{d}*sum_(k={p}..{upto}) (e0+e1)^k")
            p = upto + 1
            continue
        else:
            raise CertificateMismatch(f"unknown step kind {kind!r}")
        poly = poly - piece
        pieces.append(canonical_string(piece))
    return Replay(poly, p, d, half_box, pieces)


@dataclass
class Verdict:
    name: str
    passed: bool
    remainder: PolyQ
    tail_power: int
    tail_coeff: Fraction
    domain: str
    pieces: list[str]

    def residual_string(self) -> str:
        s = canonical_string(self.remainder)
        if self.tail_coeff:
            s += f" + {self.tail_coeff}*(e0+e1)^{self.tail_power}/r"
        return s


def verify_certificate(target: RatFnQ, floor, cert: Certificate) -> Verdict:
    """Replay ``cert`` on ``target - floor``; raise CertificateGap on failure."""
    if Fraction(floor) != cert.floor:
        cert = Certificate(cert.name, cert.target, Fraction(floor), cert.tail_power,
                           cert.tail_coeff, cert.steps, cert.note)
    if cert.tail_coeff < 0:
        raise CertificateMismatch("tail coefficient must be nonnegative")
    rep = replay(target, cert)
    neg = rep.first_negative()
    if neg is not None:
        raise CertificateGap(neg[0], neg[1], rep.remainder)
    if not rep.witness():
        raise CertificateGap((0, 0), Fraction(0), rep.remainder)
    domain = "[0,1/2]^2 minus origin" if rep.half_box else "[0,1]^2 minus origin"
    return Verdict(cert.name, True, rep.remainder, rep.tail_power, rep.tail_coeff, domain, rep.pieces)


# --- grid scan ----------------------------------------------------------------

@dataclass
class ScanResult:
    minimum: Fraction
    argmin: tuple[Fraction, Fraction]
    points: int

    @property
    def positive(self) -> bool:
        return self.minimum > 0


def _int_eval(poly: PolyQ, a: int, b: int, big: int, deg: int) -> Fraction:
    """poly(a/big, b/big) * big^deg as an exact rational with small denominators."""
    tot = Fraction(0)
    for (i, j), c in poly.items():
        tot += c * (a ** i) * (b ** j) * big ** (deg - i - j)
    return tot


def _eval_scaled(expr: RatFnQ, a: int, b: int, big: int) -> Fraction:
    deg = max(expr.num.degree(), 0)
    num = _int_eval(expr.num, a, b, big, deg) / Fraction(big) ** deg
    rr = Fraction(big - a - b, big)
    return num / rr ** expr.rpow


def grid_scan(expr: RatFnQ | Sequence[RatFnQ], floor, grid_step) -> ScanResult:
    """Exact minimum of expr - floor on the grid of step ``grid_step`` in [0,1/2]^2.

    The origin and points with r = 0 are skipped.  A sequence of expressions is
    scanned as their pointwise minimum.
    """
    step = Fraction(grid_step)
    floor = Fraction(floor)
    if step <= 0 or (Fraction(1, 2) / step).denominator != 1:
        raise ValueError("grid step must divide 1/2")
    exprs = [expr] if isinstance(expr, RatFnQ) else list(expr)
    m = int(Fraction(1, 2) / step)
    big = step.denominator
    unit = step.numerator
    best = None
    arg = None
    count = 0
    for i in range(m + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            a, b = i * unit, j * unit
            if a + b == big:
                continue
            v = min(_eval_scaled(e, a, b, big) for e in exprs) - floor
            count += 1
            if best is None or v < best:
                best, arg = v, (i * step, j * step)
    return ScanResult(best, arg, count)
