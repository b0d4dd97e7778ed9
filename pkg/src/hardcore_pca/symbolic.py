"""Exact polynomials in (e0, e1) over the rationals, and their extension by
negative powers of r = 1 - e0 - e1.

Everything here is pure ``fractions.Fraction`` arithmetic; no floats are ever
introduced.  ``PolyQ`` is the polynomial ring Q[e0, e1]; ``RatFnQ`` holds
``num / r**rpow`` kept in lowest terms with respect to r.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]
Exp = tuple[int, int]


def _q(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact rational expected, got {type(value).__name__}")


def _order_key(exp: Exp):
    # total degree ascending, then e0-degree descending
    return (exp[0] + exp[1], -exp[0])


class PolyQ:
    """Polynomial in e0, e1 with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, Number] | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            a0, a1 = exp
            if a0 < 0 or a1 < 0:
                raise ValueError(f"negative exponent {exp}")
            c = _q(c)
            if c:
                clean[(int(a0), int(a1))] = c
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def const(cls, c: Number) -> "PolyQ":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a0: int, a1: int, c: Number = 1) -> "PolyQ":
        return cls({(a0, a1): c})

    @classmethod
    def coerce(cls, value) -> "PolyQ":
        if isinstance(value, PolyQ):
            return value
        return cls.const(_q(value))

    # inspection

    @property
    def terms(self) -> dict[Exp, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exp, Fraction]]:
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]))

    def coeff(self, a0: int, a1: int) -> Fraction:
        return self._terms.get((a0, a1), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((a + b for a, b in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, RatFnQ):
            return other == self
        try:
            other = PolyQ.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ring operations

    def __add__(self, other):
        if isinstance(other, RatFnQ):
            return RatFnQ(self) + other
        other = PolyQ.coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, 0) + c
        return PolyQ(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFnQ):
            return RatFnQ(self) * other
        other = PolyQ.coerce(other)
        out: dict[Exp, Fraction] = {}
        for (a0, a1), c in self._terms.items():
            for (b0, b1), d in other._terms.items():
                key = (a0 + b0, a1 + b1)
                out[key] = out.get(key, 0) + c * d
        return PolyQ(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                _zero_div()
            return self * (Fraction(1) / _q(other))
        if isinstance(other, (PolyQ, RatFnQ)):
            return RatFnQ(self) / other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def expand(self) -> "PolyQ":
        # storage is always the expanded monomial map
        return self

    def substitute(self, e0=None, e1=None) -> "PolyQ":
        """Replace e0 and/or e1 by polynomials."""
        s0 = E0 if e0 is None else PolyQ.coerce(e0)
        s1 = E1 if e1 is None else PolyQ.coerce(e1)
        out = ZERO
        cache0, cache1 = {}, {}
        for (a0, a1), c in self._terms.items():
            if a0 not in cache0:
                cache0[a0] = s0 ** a0
            if a1 not in cache1:
                cache1[a1] = s1 ** a1
            out = out + cache0[a0] * cache1[a1] * c
        return out

    def eval_at(self, e0: Number, e1: Number) -> Fraction:
        x, y = _q(e0), _q(e1)
        total = Fraction(0)
        for (a0, a1), c in self._terms.items():
            total += c * x ** a0 * y ** a1
        return total

    def __call__(self, e0, e1):
        return self.eval_at(e0, e1)

    def divide_by_r(self) -> "PolyQ | None":
        """Exact quotient self / (1 - e0 - e1), or None if r does not divide."""
        if self.is_zero():
            return ZERO
        # view as polynomial in e1 with coefficients in Q[e0]; r = c - e1, c = 1 - e0
        by_e1: dict[int, PolyQ] = {}
        for (a0, a1), c in self._terms.items():
            by_e1[a1] = by_e1.get(a1, ZERO) + PolyQ.monomial(a0, 0, c)
        d = max(by_e1)
        if d == 0:
            return None
        c = ONE - E0
        q = [ZERO] * d
        q[d - 1] = by_e1.get(d, ZERO)
        for j in range(d - 1, 0, -1):
            q[j - 1] = by_e1.get(j, ZERO) + c * q[j]
        remainder = by_e1.get(0, ZERO) + c * q[0]
        if not remainder.is_zero():
            return None
        quotient = ZERO
        for j, qj in enumerate(q):
            quotient = quotient + qj * PolyQ.monomial(0, j)
        return -quotient

    def __repr__(self):
        return f"PolyQ({canonical_string(self)!r})"

    def __str__(self):
        return canonical_string(self)


def _zero_div():
    raise ZeroDivisionError("division by zero")


ZERO = PolyQ()
ONE = PolyQ.const(1)
E0 = PolyQ.monomial(1, 0)
E1 = PolyQ.monomial(0, 1)
R = PolyQ({(0, 0): 1, (1, 0): -1, (0, 1): -1})  # r itself; 1 - r = e0 + e1


class RatFnQ:
    """``num / r**rpow`` with r = 1 - e0 - e1, normalized so r does not divide num
    whenever rpow > 0."""

    __slots__ = ("num", "rpow")

    def __init__(self, num=None, rpow: int = 0):
        num = ZERO if num is None else PolyQ.coerce(num)
        if rpow < 0:
            num = num * R ** (-rpow)
            rpow = 0
        while rpow > 0:
            q = num.divide_by_r()
            if q is None:
                break
            num, rpow = q, rpow - 1
        if num.is_zero():
            rpow = 0
        self.num = num
        self.rpow = rpow

    @classmethod
    def coerce(cls, value) -> "RatFnQ":
        if isinstance(value, RatFnQ):
            return value
        return cls(PolyQ.coerce(value))

    def is_poly(self) -> bool:
        return self.rpow == 0

    def poly(self) -> PolyQ:
        if self.rpow:
            raise ValueError(f"not a polynomial: {canonical_string(self)}")
        return self.num

    def _aligned(self, other: "RatFnQ"):
        k = max(self.rpow, other.rpow)
        a = self.num * R ** (k - self.rpow)
        b = other.num * R ** (k - other.rpow)
        return a, b, k

    def __add__(self, other):
        other = RatFnQ.coerce(other)
        a, b, k = self._aligned(other)
        return RatFnQ(a + b, k)

    __radd__ = __add__

    def __neg__(self):
        return RatFnQ(-self.num, self.rpow)

    def __sub__(self, other):
        return self + (-RatFnQ.coerce(other))

    def __rsub__(self, other):
        return RatFnQ.coerce(other) - self

    def __mul__(self, other):
        other = RatFnQ.coerce(other)
        return RatFnQ(self.num * other.num, self.rpow + other.rpow)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                _zero_div()
            return RatFnQ(self.num * (Fraction(1) / _q(other)), self.rpow)
        other = RatFnQ.coerce(other)
        # only division by powers of r (times a nonzero constant) stays in the ring
        if len(other.num) == 1 and (0, 0) in other.num.terms:
            c = other.num.coeff(0, 0)
            return RatFnQ(self.num * (1 / c), self.rpow - other.rpow)
        if other.num == R and other.rpow == 0:
            return RatFnQ(self.num, self.rpow + 1)
        q = other.num
        k = 0
        while True:
            nxt = q.divide_by_r()
            if nxt is None:
                break
            q, k = nxt, k + 1
        if len(q) == 1 and (0, 0) in q.terms:
            return RatFnQ(self.num * (1 / q.coeff(0, 0)), self.rpow - other.rpow + k)
        raise ValueError("denominator is not a power of r")

    def __rtruediv__(self, other):
        return RatFnQ.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        return RatFnQ(self.num ** k, self.rpow * k)

    def __eq__(self, other):
        try:
            other = RatFnQ.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self):
        return hash((self.num, self.rpow))

    def expand(self) -> "RatFnQ":
        return self

    def substitute(self, e0=None, e1=None) -> "RatFnQ":
        """Substitute in numerator and in r alike (r is rebuilt from e0, e1)."""
        num = self.num.substitute(e0, e1)
        return _rat_over(num, R.substitute(e0, e1), self.rpow)

    def eval_at(self, e0: Number, e1: Number) -> Fraction:
        x, y = _q(e0), _q(e1)
        r = 1 - x - y
        if self.rpow and r == 0:
            raise ZeroDivisionError("r = 0 with a negative power of r")
        return self.num.eval_at(x, y) / r ** self.rpow

    def __call__(self, e0, e1):
        return self.eval_at(e0, e1)

    def __repr__(self):
        return f"RatFnQ({canonical_string(self)!r})"

    def __str__(self):
        return canonical_string(self)


def _rat_over(num: PolyQ, den: PolyQ, k: int) -> RatFnQ:
    out = RatFnQ(num)
    for _ in range(k):
        out = out / RatFnQ(den)
    return out


def tail(p: int) -> RatFnQ:
    """(1 - r)**p / r."""
    return RatFnQ((E0 + E1) ** p, 1)


def geom_sum(c: Number, leading=ONE) -> RatFnQ:
    """Closed form of sum_{k>=0} leading * (k + c) * (1-r)**k * r = leading * (c + (1-r)/r)."""
    return RatFnQ.coerce(leading) * (RatFnQ.coerce(_q(c)) + tail(1))


def geom_mass(leading=ONE) -> RatFnQ:
    """Closed form of sum_{k>=0} leading * (1-r)**k * r, which is just ``leading``."""
    return RatFnQ.coerce(leading)


def truncated_geom_sum(c: Number, leading, e0: Number, e1: Number, terms: int = 64) -> float:
    """Float partial sum of the series behind :func:`geom_sum`; used as a cross-check."""
    x, y = float(_q(e0)), float(_q(e1))
    r = 1.0 - x - y
    lead = float(RatFnQ.coerce(leading).eval_at(e0, e1))
    return sum(lead * (k + float(c)) * (1.0 - r) ** k * r for k in range(terms))


# --- text formats ---------------------------------------------------------

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(a0: int, a1: int) -> str:
    parts = []
    for name, a in (("e0", a0), ("e1", a1)):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def _poly_string(p: PolyQ) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, ((a0, a1), c) in enumerate(p.items()):
        mono = _fmt_mono(a0, a1)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{_fmt_coeff(mag)}*{mono}"
        else:
            body = _fmt_coeff(mag)
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def canonical_string(p) -> str:
    """Deterministic text: ``1 - 3/2*e0^2*e1``; rational functions as ``(POLY)/r^d``."""
    if isinstance(p, RatFnQ):
        if p.rpow == 0:
            return _poly_string(p.num)
        return f"({_poly_string(p.num)})/r^{p.rpow}"
    return _poly_string(PolyQ.coerce(p))


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(e0|e1|x|y)|(\^)|([-+*/()])|(r))")


def _tokens(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        num, var, caret, op, rr = m.groups()
        if num is not None:
            out.append(("num", num))
        elif var is not None:
            out.append(("var", {"x": "e0", "y": "e1"}.get(var, var)))
        elif caret:
            out.append(("op", "^"))
        elif op is not None:
            out.append(("op", op))
        else:
            out.append(("r", "r"))
        pos = m.end()
    return out


def parse_poly(text: str) -> PolyQ:
    """Parse a sum of signed terms ``c*e0^a*e1^b`` (the canonical form).

    Accepts any term order, ``x``/``y`` as aliases of ``e0``/``e1``, and
    juxtaposed variables (``3x^2y``).  A number directly after a variable is
    rejected rather than guessed.
    """
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty polynomial")
    pos = 0
    out: dict[Exp, Fraction] = {}

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    first = True
    while pos < len(toks):
        sign = 1
        kind, val = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
        elif not first:
            raise ParseError(f"expected + or - before term, got {val!r}")
        first = False
        coeff = Fraction(1)
        a = [0, 0]
        seen = False
        while True:
            kind, val = peek()
            if kind == "num":
                coeff *= Fraction(val)
                pos += 1
            elif kind == "var":
                pos += 1
                k = 1
                if peek() == ("op", "^"):
                    pos += 1
                    kind2, val2 = peek()
                    if kind2 != "num" or "/" in val2:
                        raise ParseError("bad exponent")
                    k = int(val2)
                    pos += 1
                a[0 if val == "e0" else 1] += k
            else:
                raise ParseError(f"expected factor, got {val!r}")
            seen = True
            if peek() == ("op", "*"):
                pos += 1
                continue
            if peek()[0] == "var":  # implicit product such as 3x^2y
                continue
            break
        if not seen:
            raise ParseError("empty term")
        key = (a[0], a[1])
        out[key] = out.get(key, 0) + sign * coeff
    return PolyQ(out)


_RAT = re.compile(r"^\s*\((.*)\)\s*/\s*r(?:\s*\^\s*(\d+))?\s*$", re.S)


def parse(text: str):
    """Inverse of :func:`canonical_string`: returns a PolyQ or a RatFnQ."""
    m = _RAT.match(text)
    if m:
        k = int(m.group(2) or 1)
        return RatFnQ(parse_poly(m.group(1)), k)
    return parse_poly(text)


def to_json(p) -> str:
    rat = RatFnQ.coerce(p)
    terms = [{"a0": a0, "a1": a1, "coeff": _fmt_coeff(c)} for (a0, a1), c in rat.num.items()]
    return json.dumps({"terms": terms, "rpow": rat.rpow})


def from_json(text: str) -> RatFnQ:
    data = json.loads(text)
    num = PolyQ({(t["a0"], t["a1"]): Fraction(t["coeff"]) for t in data["terms"]})
    return RatFnQ(num, data.get("rpow", 0))


def poly_sum(items: Iterable) -> RatFnQ:
    total = RatFnQ()
    for it in items:
        total = total + it
    return total
