"""Named inequalities: each target expression with the floor it must exceed."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable

from ..symbolic import RatFnQ
from . import drifts
from .certify import Certificate
from .fixtures import expected


@dataclass(frozen=True)
class Target:
    name: str
    build: Callable[[], RatFnQ]
    floor: Fraction
    description: str


def _d0():
    return drifts.drift2_n3_0000()[0]


def _d1():
    return drifts.drift2_n3_0000()[1]


TARGETS: dict[str, Target] = {t.name: t for t in [
    Target("n2_one_step", drifts.drift1_n2_general, Fraction(-1, 2),
           "one-step drift from the general n=2 classes exceeds -1/2"),
    Target("n2_two_step", drifts.drift2_n2_00, Fraction(-1),
           "two-step bound from (0,0) exceeds -1"),
    Target("n2_two_step_reference", lambda: expected("drift2_n2_00"), Fraction(-1),
           "reference expansion of the (0,0) two-step bound exceeds -1"),
    Target("n3_S1_one_step", drifts.drift1_n3_S1, Fraction(-1),
           "one-step drift from S1 exceeds -1"),
    Target("n3_S1_minus_I0", lambda: drifts.drift1_n3_S1() - drifts.drift1_n3_0000_bound(), Fraction(0),
           "S1 drift dominates the 0000 bound I0"),
    Target("n3_S1_minus_D10", lambda: drifts.drift1_n3_S1() - drifts.drift1_n3_1000(), Fraction(0),
           "S1 drift dominates the 1000 drift"),
    Target("n3_1000_two_step", drifts.drift2_n3_1000, Fraction(-2),
           "two-step bound from 1000 exceeds -2"),
    Target("n3_0000_two_step_I0", _d0, Fraction(-2),
           "two-step bound from 0000 exceeds -2 when min is I0"),
    Target("n3_0000_two_step_D10", _d1, Fraction(-2),
           "two-step bound from 0000 exceeds -2 when min is the 1000 drift"),
]}

# Certificate files shipped with the package, grouped by inequality.
CERTIFICATE_GROUPS: dict[str, tuple[str, ...]] = {
    "n2_two_step": ("n2_two_step",),
    "n3_1000_two_step": ("n3_1000_two_step",),
    "n3_S1_vs_I0": ("n3_S1_minus_I0",),
    "n3_S1_vs_D10": ("n3_S1_minus_D10",),
    "n3_0000_two_step": ("n3_0000_two_step_I0", "n3_0000_two_step_D10"),
}

EXTRA_CERTIFICATES = ("n2_two_step_reference", "n2_one_step", "n3_S1_one_step")

# Grid scans required for the bounds (expression names; lists are pointwise minima).
SCANS: dict[str, tuple[str, ...]] = {
    "n2_one_step": ("n2_one_step",),
    "n2_two_step": ("n2_two_step",),
    "n3_S1_one_step": ("n3_S1_one_step",),
    "n3_S1_minus_I0": ("n3_S1_minus_I0",),
    "n3_S1_minus_D10": ("n3_S1_minus_D10",),
    "n3_1000_two_step": ("n3_1000_two_step",),
    "n3_0000_two_step_min": ("n3_0000_two_step_I0", "n3_0000_two_step_D10"),
}


def certificate_path(name: str):
    return resources.files("hardcore_pca.drift") / "certificates" / f"{name}.json"


def load_certificate(name: str) -> Certificate:
    return Certificate.from_json(json.loads(certificate_path(name).read_text()))
