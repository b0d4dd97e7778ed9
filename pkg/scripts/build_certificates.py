"""Build the positivity certificates shipped in hardcore_pca/drift/certificates/.

Hand groupings are listed below where a short argument exists.  Whatever they
leave negative is completed greedily: expand the (e0+e1)^p / r tail to a
finite degree, then cancel each negative monomial against positive monomials
that divide it, at unit scale if that suffices for all terms and otherwise
entirely at half scale.
The output is frozen JSON; the package only replays it.

    python3 scripts/build_certificates.py [--check]
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from hardcore_pca.drift.certify import Certificate, CertificateGap, replay, verify_certificate
from hardcore_pca.drift.registry import CERTIFICATE_GROUPS, EXTRA_CERTIFICATES, TARGETS

OUT = Path(__file__).resolve().parents[1] / "src" / "hardcore_pca" / "drift" / "certificates"


def dom(a, b, c, scale="unit"):
    return {"kind": "dominate", "pos": list(a), "neg": list(b), "coeff": str(Fraction(c)), "scale": scale}


def square(c, m1, m2):
    return {"kind": "square", "coeff": str(Fraction(c)), "m1": list(m1), "m2": list(m2)}


# (name, tail power, tail coefficient, hand steps, note)
HAND = {
    "n2_two_step_reference": (2, 2, [
        dom((4, 0), (5, 0), Fraction(7, 2)),
        dom((3, 2), (4, 2), 1), dom((3, 2), (3, 3), 2),
        dom((2, 1), (3, 1), 4),
        dom((2, 0), (3, 0), Fraction(3, 2)),
        dom((1, 3), (1, 4), 1), dom((1, 2), (1, 4), Fraction(1, 2)),
        dom((0, 1), (4, 1), Fraction(3, 2)), dom((0, 1), (1, 1), Fraction(1, 2)),
        {"kind": "tail", "upto": 2},
        dom((1, 1), (2, 2), Fraction(13, 2), "half"),
    ], "monomial groupings, then 2(e0+e1)^2 from the tail, then 13/2 e0^2 e1^2 against 4 e0 e1"),
    "n2_two_step": (2, 2, [
        dom((4, 0), (5, 0), Fraction(7, 2)),
        dom((3, 2), (4, 2), 1), dom((3, 2), (3, 3), 2),
        dom((2, 1), (3, 1), 4),
        dom((2, 0), (3, 0), Fraction(1, 2)),
        dom((1, 3), (1, 4), 1), dom((1, 2), (1, 4), Fraction(1, 2)),
        dom((0, 1), (4, 1), Fraction(3, 2)), dom((0, 1), (1, 1), Fraction(1, 2)),
        dom((0, 1), (0, 3), Fraction(1, 2)),
        {"kind": "tail", "upto": 2},
        dom((1, 1), (2, 2), Fraction(13, 2), "half"),
    ], "same groupings as the reference expansion, adjusted for the r*(e1^2/2 - e0^2) difference"),
    "n3_S1_minus_I0": (3, 0, [
        square(1, (1, 0), (0, 1)),
        dom((0, 1), (0, 3), 3, "half"), dom((1, 0), (2, 1), 3, "half"),
        dom((1, 0), (3, 0), 4, "half"), dom((2, 0), (3, 0), 2, "half"),
    ], "square (e0-e1)^2, then e0, e1 <= 1/2 on the cubic terms"),
    "n3_S1_minus_D10": (3, 0, [
        dom((0, 1), (0, 3), 3, "half"), dom((1, 0), (1, 1), 1, "half"),
        dom((0, 1), (2, 1), 1, "half"), dom((1, 0), (3, 0), 2, "half"),
        dom((1, 0), (1, 2), 2, "half"),
    ], "e0, e1 <= 1/2 on every negative term"),
    "n3_1000_two_step": (3, 2, [
        dom((0, 2), (0, 3), 3),
        dom((1, 5), (1, 6), 6), dom((1, 5), (2, 6), 5),
        dom((2, 3), (2, 4), 12),
        dom((3, 3), (3, 4), 12), dom((3, 3), (4, 5), 3),
        dom((4, 0), (5, 0), 1), dom((4, 0), (5, 4), 2),
        dom((7, 0), (8, 0), 3),
        dom((4, 2), (4, 3), 43),
    ], "seven hand groupings, rest against the tail expanded to degree 8"),
    "n3_0000_two_step_I0": (3, 2, [], "greedy"),
    "n3_0000_two_step_D10": (3, 2, [], "greedy"),
    "n2_one_step": (2, 1, [], "greedy"),
    "n3_S1_one_step": (3, 1, [], "greedy"),
}


def greedy_completion(expr, cert: Certificate, allow_half: bool, max_degree: int = 14):
    """Append a tail expansion and dominate steps until the remainder is nonnegative."""
    for upto in range(cert.tail_power, max_degree + 1):
        steps = list(cert.steps)
        if cert.tail_coeff and upto >= cert.tail_power:
            steps.append({"kind": "tail", "upto": upto})
        trial = Certificate(cert.name, cert.target, cert.floor, cert.tail_power, cert.tail_coeff, steps)
        rem = dict(replay(expr, trial).remainder.items())
        extra = []
        ok = True
        negs = sorted((a for a, c in rem.items() if c < 0), key=lambda a: (a[0] + a[1], a))
        for b in negs:
            need = -rem[b]
            scale = "half" if allow_half else "unit"
            cands = sorted(
                (a for a, c in rem.items() if c > 0 and a != b and a[0] <= b[0] and a[1] <= b[1]),
                key=lambda a: -(a[0] + a[1]),
            )
            for a in cands:
                if need == 0:
                    break
                gap = (b[0] + b[1]) - (a[0] + a[1])
                rate = Fraction(1, 2 ** gap) if scale == "half" else Fraction(1)
                kill = min(need, rem[a] / rate)
                rem[a] -= kill * rate
                rem[b] += kill
                need -= kill
                extra.append(dom(a, b, kill, scale))
            if need > 0:
                ok = False
                break
        if ok:
            steps.extend(extra)
            if not cert.tail_coeff:
                steps = [s for s in steps if s["kind"] != "tail"]
            return steps
        if not cert.tail_coeff:
            break
    return None


def build(name: str) -> Certificate:
    target = TARGETS[name]
    p, d, steps, note = HAND[name]
    cert = Certificate(name, name, target.floor, p, Fraction(d), list(steps), note)
    expr = target.build()
    try:
        verify_certificate(expr, target.floor, cert)
        return cert
    except CertificateGap:
        pass
    for allow_half in (False, True):
        done = greedy_completion(expr, cert, allow_half)
        if done is not None:
            cert.steps = done
            verify_certificate(expr, target.floor, cert)
            return cert
    raise SystemExit(f"could not complete certificate for {name}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare with the shipped files instead of writing")
    args = ap.parse_args(argv)
    names = [n for group in CERTIFICATE_GROUPS.values() for n in group] + list(EXTRA_CERTIFICATES)
    OUT.mkdir(parents=True, exist_ok=True)
    stale = 0
    for name in names:
        cert = build(name)
        path = OUT / f"{name}.json"
        if args.check:
            same = path.exists() and Certificate.load(path).to_json() == cert.to_json()
            stale += not same
            print(f"{name}: {'up to date' if same else 'STALE'}")
        else:
            cert.dump(path)
            print(f"{name}: {len(cert.steps)} steps -> {path.name}")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
