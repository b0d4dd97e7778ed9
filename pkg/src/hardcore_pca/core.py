"""Shared types: noise parameters, cell states, half-integer positions, seeded draws."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Union

import numpy as np

Number = Union[int, float, str, Fraction]


class NegativeProbability(ValueError):
    pass


class MassExceeded(ValueError):
    pass


def parse_probability(value: Number) -> Fraction:
    """Exact rational from "p/q", a decimal string, an int, a float or a Fraction.

    Decimals and floats go to the nearest rational with denominator <= 10**6.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not np.isfinite(value):
            raise ValueError(f"non-finite probability {value!r}")
        return Fraction(repr(value)).limit_denominator(10**6)
    text = str(value).strip()
    if "/" in text:
        return Fraction(text)
    return Fraction(text).limit_denominator(10**6)


@dataclass(frozen=True)
class NoiseParams:
    eps0: Fraction  # forced 0 (target)
    eps1: Fraction  # forced 1 (trap)

    @property
    def r(self) -> Fraction:
        return 1 - self.eps0 - self.eps1

    @property
    def theorem_scope(self) -> bool:
        return (self.eps0 <= Fraction(1, 2) and self.eps1 <= Fraction(1, 2)
                and (self.eps0, self.eps1) != (0, 0))

    def as_floats(self) -> tuple[float, float, float]:
        return float(self.eps0), float(self.eps1), float(self.r)

    def __str__(self):
        return f"(eps0={self.eps0}, eps1={self.eps1})"


def validate_noise(eps0: Number, eps1: Number) -> NoiseParams:
    e0, e1 = parse_probability(eps0), parse_probability(eps1)
    if e0 < 0 or e1 < 0:
        raise NegativeProbability(f"negative probability in (eps0, eps1) = ({e0}, {e1})")
    if e0 + e1 > 1:
        raise MassExceeded(f"eps0 + eps1 = {e0 + e1} exceeds 1")
    return NoiseParams(e0, e1)


class EnvState(IntEnum):
    ZERO = 0
    ONE = 1
    QUESTION = 2


class Label(IntEnum):
    TRAP = 0
    TARGET = 1
    OPEN = 2


STATE_CHARS = "01?"
LABEL_CHARS = "TG."

# Rows are numpy uint8 arrays over {0, 1, 2}; 2 is "?".
Q = np.uint8(EnvState.QUESTION)


def row_from_string(text: str) -> np.ndarray:
    try:
        return np.array([STATE_CHARS.index(c) for c in text], dtype=np.uint8)
    except ValueError as exc:
        raise ValueError(f"row characters must be in {STATE_CHARS!r}") from exc


def row_to_string(row) -> str:
    return "".join(STATE_CHARS[int(c)] for c in row)


@dataclass(frozen=True, order=True)
class HalfPos:
    """A position in (1/2)Z stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfPos":
        v = Fraction(value) * 2
        if v.denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(v))

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def __add__(self, other: "HalfPos") -> "HalfPos":
        return HalfPos(self.doubled + other.doubled)

    def __sub__(self, other: "HalfPos") -> "HalfPos":
        return HalfPos(self.doubled - other.doubled)

    def __neg__(self) -> "HalfPos":
        return HalfPos(-self.doubled)

    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __str__(self):
        return str(self.value)


# --- counter-based draws ------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def _mix(z):
    """splitmix64 finaliser on uint64 arrays (wrapping arithmetic)."""
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _u64(x) -> np.ndarray:
    a = np.asarray(x)
    if a.dtype == np.uint64:
        return a
    return a.astype(np.int64).view(np.uint64) if a.dtype.kind == "i" else a.astype(np.uint64)


def uniforms(master_seed: int, trial, key, cell) -> np.ndarray:
    """One uniform in [0, 1) per (trial, key, cell); arguments broadcast.

    ``key`` is the time step for PCA runs and the row index for game boards.
    Negative integers are allowed for keys and cells.
    """
    with np.errstate(over="ignore"):
        s = _mix(np.uint64(master_seed & _MASK) + _GOLDEN)
        h = _mix(s ^ (_u64(trial) * _GOLDEN + np.uint64(1)))
        h = _mix(h ^ (_u64(key) * _M1 + np.uint64(2)))
        h = _mix(h ^ (_u64(cell) * _M2 + np.uint64(3)))
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    trial: int = 0

    def draws(self, key, cells) -> np.ndarray:
        return uniforms(self.master_seed, self.trial, key, cells)

    def with_trial(self, trial: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, trial)


def site_label(params: NoiseParams, u: float) -> Label:
    """Trap on [0, eps1), target on [eps1, eps1+eps0), open on the rest."""
    # same float thresholds as site_labels, so both always agree
    if u < float(params.eps1):
        return Label.TRAP
    if u < float(params.eps1 + params.eps0):
        return Label.TARGET
    return Label.OPEN


def site_labels(params: NoiseParams, u: np.ndarray) -> np.ndarray:
    """Vectorised site_label (uint8 array of Label values)."""
    t1 = float(params.eps1)
    t2 = float(params.eps1 + params.eps0)
    out = np.full(np.shape(u), Label.OPEN, dtype=np.uint8)
    out[u < t2] = Label.TARGET
    out[u < t1] = Label.TRAP
    return out
