import json
from fractions import Fraction

import pytest

from hardcore_pca.drift import drifts, registry
from hardcore_pca.drift.certify import (
    Certificate, CertificateGap, CertificateMismatch, grid_scan, replay, verify_certificate,
)
from hardcore_pca.symbolic import E0, E1, PolyQ, parse_poly

ALL = [c for g in registry.CERTIFICATE_GROUPS.values() for c in g] + list(registry.EXTRA_CERTIFICATES)


def check(name, cert=None):
    t = registry.TARGETS[name]
    return verify_certificate(t.build(), t.floor, cert or registry.load_certificate(name))


@pytest.mark.parametrize("name", ALL)
def test_shipped_certificates_pass(name):
    assert check(name).passed


def test_five_groups():
    assert len(registry.CERTIFICATE_GROUPS) == 5


def test_s1_minus_i0_remainder():
    v = check("n3_S1_minus_I0")
    square = (E0 - E1) ** 2
    want = parse_poly("1/4x + 1/4y + y^2 + y^4 + 4x^3y + 3x^4") + square
    assert v.remainder + square == want


def test_s1_minus_d10_remainder():
    v = check("n3_S1_minus_D10")
    assert v.remainder == parse_poly("1/2x + 2y^2 + y^4 + x^3y + x^4 + xy^3")


@pytest.mark.parametrize("name", ALL)
def test_dropping_a_grouping_leaves_a_gap(name):
    cert = registry.load_certificate(name)
    steps = [s for s in cert.steps if s["kind"] == "dominate"]
    if not steps:
        pytest.skip("no groupings")
    broken = Certificate(cert.name, cert.target, cert.floor, cert.tail_power, cert.tail_coeff,
                         [s for s in cert.steps if s is not steps[0]], cert.note)
    with pytest.raises(CertificateGap) as info:
        check(name, broken)
    assert info.value.coeff < 0


def test_malformed_step():
    cert = registry.load_certificate("n3_S1_minus_D10")
    bad = Certificate.from_json(cert.to_json())
    bad.steps[0] = {"kind": "dominate", "pos": [0, 3], "neg": [0, 1], "coeff": "1"}
    with pytest.raises(CertificateMismatch):
        check("n3_S1_minus_D10", bad)


def test_json_round_trip(tmp_path):
    cert = registry.load_certificate("n2_two_step")
    path = tmp_path / "c.json"
    cert.dump(path)
    assert Certificate.load(path) == cert
    assert json.loads(path.read_text())["name"] == "n2_two_step"


def test_replay_is_additive():
    t = registry.TARGETS["n3_1000_two_step"]
    cert = registry.load_certificate("n3_1000_two_step")
    rep = replay(t.build(), cert)
    assert rep.tail_coeff == 2 and rep.remainder.degree() >= 1


def test_scan_n2_one_step():
    sr = grid_scan(drifts.drift1_n2_general(), Fraction(-1, 2), Fraction(1, 100))
    assert sr.positive
    assert max(sr.argmin) == Fraction(1, 100) and min(sr.argmin) == 0


def test_s1_near_origin():
    v = drifts.drift1_n3_S1().eval_at(Fraction(1, 100), 0) + 1
    assert v > 0 and abs(v - (Fraction(1, 100) + Fraction(1, 10000))) < Fraction(1, 10**5)


def test_scan_min_d0_d1():
    d0, d1 = drifts.drift2_n3_0000()
    assert grid_scan([d0, d1], -2, Fraction(1, 50)).positive


def test_scan_detects_negative():
    sr = grid_scan(drifts.drift1_n2_general(), Fraction(-1, 5), Fraction(1, 10))
    assert not sr.positive


def test_scan_rejects_bad_step():
    with pytest.raises(ValueError):
        grid_scan(drifts.drift1_n2_general(), 0, Fraction(1, 3))
