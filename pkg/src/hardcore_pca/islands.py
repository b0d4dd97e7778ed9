"""Decorrelated islands: detection, boundary positions, classes and drift estimates.

An island is a maximal run of binary cells in an envelope row.  Its right end
j moves by J_t per step; the modified position j + offset(last cells) has
increments whose conditional law given the boundary class is tabulated in
``hardcore_pca.drift.kernels``.

Two ways to follow an island are provided:

* ``track`` follows the focal island of a ring trajectory.
* ``island_walk`` evolves a single island on the infinite line with every
  other cell held at ?, which is the setting the kernels describe.  New
  binary cells produced away from the island are dropped unless they touch it.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import HalfPos, Label, NoiseParams, SeedSpec, site_labels
from .pca import QM, Trajectory

GAP = {2: 5, 3: 9}
ARITY = {2: 2, 3: 4}
N2_GENERAL = ("01", "10", "11")


class AllBinaryRow(ValueError):
    pass


class InsufficientContext(ValueError):
    pass


class BadArity(ValueError):
    pass


class EmptySample(ValueError):
    pass


@dataclass(frozen=True)
class Island:
    i: int  # leftmost cell
    j: int  # rightmost cell, not reduced mod width (j >= i)
    alive: bool = True

    def length(self) -> int:
        return self.j - self.i + 1


def find_islands(row, periodic: bool = True) -> list[Island]:
    """Maximal ?-free runs on a ring; a run crossing the seam is one island.

    With ``periodic=False`` the row is read as a segment and the two ends
    are never joined.
    """
    row = np.asarray(row)
    w = len(row)
    binary = row != QM
    if not periodic:
        d = np.diff(np.concatenate(([0], binary.astype(np.int8), [0])))
        return [Island(int(a), int(b) - 1) for a, b in zip(np.nonzero(d == 1)[0], np.nonzero(d == -1)[0])]
    if binary.all():
        raise AllBinaryRow("no ? in the row, islands are undefined on a ring")
    if not binary.any():
        return []
    # rotate so that position 0 is a ?, then runs cannot cross the seam
    start = int(np.argmin(binary))
    rot = np.roll(binary, -start).astype(np.int8)
    d = np.diff(np.concatenate(([0], rot, [0])))
    lefts = np.nonzero(d == 1)[0]
    rights = np.nonzero(d == -1)[0] - 1
    out = []
    for a, b in zip(lefts, rights):
        i = (int(a) + start) % w
        out.append(Island(i, i + int(b - a)))
    return sorted(out, key=lambda isl: isl.i)


# --- boundary offsets and classes --------------------------------------------

def modified_right(cells: Sequence[int], n: int) -> HalfPos:
    """Offset of the modified right position from j, given cells ending at X_j."""
    c = tuple(int(x) for x in cells)
    if n == 2:
        if len(c) < 2:
            raise InsufficientContext("need X_{j-1}, X_j")
        a, b = c[-2], c[-1]
        if b == 1:
            return HalfPos(0)
        return HalfPos(-1) if a == 0 else HalfPos(-2)
    if n == 3:
        if len(c) < 3:
            raise InsufficientContext("need X_{j-2}, X_{j-1}, X_j")
        a, b, d = c[-3], c[-2], c[-1]
        if d == 1:
            return HalfPos(0)
        if (a, b) == (1, 0):
            return HalfPos(-4)
        return HalfPos(-2)  # (0,0,0) or (.,1,0)
    raise ValueError("modified positions are defined for n = 2 and n = 3")


def modified_left(cells: Sequence[int], n: int) -> HalfPos:
    """Offset of the modified left position from i, given cells starting at X_i."""
    return -modified_right(list(cells)[::-1], n)


def classify_right(f: Sequence[int], n: int) -> str:
    f = tuple(int(x) for x in f)
    if n not in ARITY or len(f) != ARITY[n]:
        raise BadArity(f"boundary for n={n} needs {ARITY.get(n, '?')} cells, got {len(f)}")
    if any(x not in (0, 1) for x in f):
        raise ValueError("boundary cells must be binary")
    s = "".join(map(str, f))
    if n == 2:
        return s
    return s if s in ("0000", "1000") else "S1"


def class_matches(cls: str, condition: str) -> bool:
    if condition in ("general", "01/10/11"):
        return cls in N2_GENERAL
    return cls == condition


# --- records ------------------------------------------------------------------

@dataclass
class BoundaryRecord:
    t: int
    i: int
    j: int
    i_mod: HalfPos
    j_mod: HalfPos
    f_left: tuple
    f_right: tuple
    class_right: Optional[str]
    gap_ok: bool
    alive: bool = True
    lineage: int = 0


def _record(t, i, cells, n, lineage) -> BoundaryRecord:
    j = i + len(cells) - 1
    m = ARITY[n]
    need = n  # cells needed for the offsets
    if len(cells) >= need:
        jm = HalfPos.of(j) + modified_right(cells[-need:], n)
        im = HalfPos.of(i) + modified_left(cells[:need], n)
    else:
        jm, im = HalfPos.of(j), HalfPos.of(i)
    fr = tuple(int(x) for x in cells[-m:]) if len(cells) >= m else ()
    fl = tuple(int(x) for x in cells[:m]) if len(cells) >= m else ()
    cls = classify_right(fr, n) if fr else None
    return BoundaryRecord(t, i, j, im, jm, fl, fr, cls, j - i >= GAP[n], True, lineage)


def _run_around(binary: np.ndarray, a: int) -> tuple[int, int]:
    """Extent (lo, hi) of the binary run containing index a on a ring, unwrapped around a."""
    w = len(binary)
    lo = a
    while binary[(lo - 1) % w] and a - lo < w:
        lo -= 1
    hi = a
    while binary[(hi + 1) % w] and hi - a < w:
        hi += 1
    return lo, hi


def track(traj: Trajectory, n: int) -> list[BoundaryRecord]:
    """Follow one island through a ring trajectory.

    The focal island at t+1 is the run containing cell j_t - (n-1).  When that
    cell is ?, the island has died: a record with alive=False is emitted and
    tracking restarts on the longest island of the next row (new lineage).
    Tracking stops once a run fills the ring.
    """
    rows = traj.rows
    w = traj.width
    recs: list[BoundaryRecord] = []
    lineage = -1
    cur: Optional[tuple[int, int]] = None  # unwrapped (i, j)
    for t in range(rows.shape[0]):
        row = rows[t]
        binary = row != QM
        if binary.all():
            break
        if cur is not None:
            a = cur[1] - (n - 1)
            if not binary[a % w]:
                recs.append(BoundaryRecord(t, cur[0], cur[1], HalfPos.of(cur[0]), HalfPos.of(cur[1]),
                                           (), (), None, False, False, lineage))
                cur = None
            else:
                lo, hi = _run_around(binary, a)
                cur = (lo, hi)
        if cur is None:
            isl = find_islands(row)
            if not isl:
                continue
            best = max(isl, key=Island.length)
            lineage += 1
            cur = (best.i, best.j)
        i, j = cur
        cells = row[np.arange(i, j + 1) % w]
        recs.append(_record(t, i, cells, n, lineage))
    return recs


# --- isolated island on the line ---------------------------------------------------

def _line_step(cells: np.ndarray, lo_pad: int, hi_pad: int, labels: np.ndarray, n: int) -> np.ndarray:
    """New states on positions [i - lo_pad, j + hi_pad] when only the island is binary."""
    L = len(cells)
    ext = np.full(lo_pad + L + hi_pad + n - 1, QM, dtype=np.uint8)
    ext[lo_pad:lo_pad + L] = cells
    size = lo_pad + L + hi_pad
    any1 = np.zeros(size, dtype=bool)
    all0 = np.ones(size, dtype=bool)
    for k in range(n):
        s = ext[k:k + size]
        any1 |= s == 1
        all0 &= s == 0
    out = np.full(size, QM, dtype=np.uint8)
    out[all0] = 1
    out[any1] = 0
    out[labels == Label.TARGET] = 0
    out[labels == Label.TRAP] = 1
    return out


def island_walk(n: int, params: NoiseParams, seed: SeedSpec, steps: int, init_cells,
                origin: int = 0, pad: int = 64) -> list[BoundaryRecord]:
    """Evolve one island on Z with ? everywhere else; stop early if it dies."""
    cells = np.asarray(init_cells, dtype=np.uint8)
    i = origin
    recs = [_record(0, i, cells, n, 0)]
    for t in range(steps):
        j = i + len(cells) - 1
        a = j - (n - 1)
        p = pad
        while True:
            lo, hi = i - (n - 1) - p, j + p
            u = seed.draws(t, np.arange(lo, hi + 1))
            new = _line_step(cells, i - lo, hi - j, site_labels(params, u), n)
            ia = a - lo
            if new[ia] == QM:
                r = recs[-1]
                recs.append(BoundaryRecord(t + 1, r.i, r.j, r.i_mod, r.j_mod, (), (), None, False, False, 0))
                return recs
            holes = np.flatnonzero(new == QM)
            k = int(np.searchsorted(holes, ia))
            if 0 < k < len(holes):
                left, right = int(holes[k - 1]) + 1, int(holes[k]) - 1
                break
            p *= 2  # run touches the window edge, widen (draws are keyed by absolute cell)
        cells = new[left:right + 1]
        i = lo + left
        recs.append(_record(t + 1, i, cells, n, 0))
    return recs


# --- estimates ------------------------------------------------------------------

@dataclass
class DriftEstimate:
    condition: str
    k_steps: int
    mean: float
    stderr: float
    count: int

    def z(self, exact: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == exact else float("inf") * np.sign(self.mean - exact)
        return (self.mean - exact) / self.stderr


def step_samples(records: Sequence[BoundaryRecord], k_steps: int = 1):
    """(class, increment of j_mod as Fraction) for consecutive live steps with gap_ok.

    Two-step samples are taken on disjoint pairs (t, t+1), t even relative to
    the first record of each lineage.
    """
    first_t: dict[int, int] = {}
    for r in records:
        first_t.setdefault(r.lineage, r.t)
    out = []
    for idx in range(len(records) - k_steps):
        r0 = records[idx]
        if not (r0.alive and r0.gap_ok and r0.class_right is not None):
            continue
        chain = records[idx:idx + k_steps + 1]
        if any(not c.alive or c.lineage != r0.lineage for c in chain):
            continue
        if any(chain[q + 1].t != chain[q].t + 1 for q in range(k_steps)):
            continue
        if k_steps == 2 and (r0.t - first_t[r0.lineage]) % 2:
            continue
        out.append((r0.class_right, (chain[-1].j_mod - r0.j_mod).value))
    return out


def estimate(samples: Iterable[tuple[str, Fraction]], condition: str, k_steps: int) -> DriftEstimate:
    vals = np.array([float(d) for c, d in samples if class_matches(c, condition)])
    if len(vals) == 0:
        raise EmptySample(f"no samples for class {condition}")
    se = float(vals.std(ddof=1) / np.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return DriftEstimate(condition, k_steps, float(vals.mean()), se, len(vals))


def empirical_drifts(records: Sequence[BoundaryRecord], condition: str, k_steps: int = 1) -> DriftEstimate:
    return estimate(step_samples(records, k_steps), condition, k_steps)


def records_csv(records: Sequence[BoundaryRecord], header: str = "", trials: Sequence[int] | None = None) -> str:
    """CSV of boundary records; ``trials`` adds a leading trial column."""
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    cols = ["t", "i", "j", "i_mod_doubled", "j_mod_doubled", "f_right", "class_right", "gap_ok", "alive"]
    w.writerow((["trial"] if trials is not None else []) + cols)
    for k, r in enumerate(records):
        lead = [trials[k]] if trials is not None else []
        w.writerow(lead + [r.t, r.i, r.j, r.i_mod.doubled, r.j_mod.doubled, "".join(map(str, r.f_right)),
                    r.class_right or "", int(r.gap_ok), int(r.alive)])
    return buf.getvalue()


# --- drift studies ------------------------------------------------------------------

@dataclass
class StudyConfig:
    n: int
    params: NoiseParams
    trials: int
    steps: int
    seed: int
    burn: int = 50
    plant: int = 32
    pad: int = 64


def planted_cells(seed: SeedSpec, length: int) -> np.ndarray:
    """Fair random binary cells for the starting island (key -1 of the trial stream)."""
    return (seed.draws(-1, np.arange(length)) < 0.5).astype(np.uint8)


def study_walks(cfg: StudyConfig):
    """Yield, per trial, the records after the burn-in period."""
    for k in range(cfg.trials):
        sd = SeedSpec(cfg.seed, k)
        recs = island_walk(cfg.n, cfg.params, sd, cfg.burn + cfg.steps, planted_cells(sd, cfg.plant), pad=cfg.pad)
        yield recs[cfg.burn:]


@dataclass
class DriftRow:
    condition: str
    k_steps: int
    mean: float
    stderr: float
    count: int
    reference: float
    exact: bool  # False when reference is only a lower bound
    z: float

    @property
    def ok(self) -> bool:
        if self.exact:
            return abs(self.z) < 3
        return self.mean >= self.reference - 3 * self.stderr


def reference_values(n: int, params: NoiseParams) -> dict[tuple[str, int], tuple[Fraction, bool]]:
    """(class, steps) -> (value, exact) from the kernel tables."""
    from .drift import drifts

    e0, e1 = params.eps0, params.eps1
    ev = lambda v: v.eval_at(e0, e1)  # noqa: E731
    if n == 2:
        g = ev(drifts.drift1_n2_general())
        out = {(c, 1): (g, True) for c in ("general",) + N2_GENERAL}
        out[("00", 1)] = (ev(drifts.drift1_n2_00_bound()), False)
        out[("00", 2)] = (ev(drifts.drift2_n2_00()), False)
        return out
    if n == 3:
        d0, d1 = drifts.drift2_n3_0000()
        return {
            ("S1", 1): (ev(drifts.drift1_n3_S1()), True),
            ("1000", 1): (ev(drifts.drift1_n3_1000()), True),
            ("0000", 1): (ev(drifts.drift1_n3_0000_bound()), False),
            ("1000", 2): (ev(drifts.drift2_n3_1000()), False),
            ("0000", 2): (min(ev(d0), ev(d1)), False),
        }
    raise ValueError("reference drifts exist for n = 2 and n = 3 only")


@dataclass
class StudyResult:
    rows: list[DriftRow]
    symmetry_mean: float  # mean over trials of -(di + dj)/T - (n - 1)
    symmetry_stderr: float
    R_hat: float
    D_hat: float
    samples: int


def drift_study(cfg: StudyConfig, sink: list | None = None) -> StudyResult:
    """Pooled per-class drift estimates and the per-trial boundary symmetry check.

    ``sink``, when given, receives (trial, records) for every trial.
    """
    s1, s2 = [], []
    ys, rs, ds = [], [], []
    for k, recs in enumerate(study_walks(cfg)):
        if sink is not None:
            sink.append((k, recs))
        s1.extend(step_samples(recs, 1))
        s2.extend(step_samples(recs, 2))
        live = [r for r in recs if r.alive]
        if len(live) >= 2:
            a, b = live[0], live[-1]
            T = b.t - a.t
            dj, di = b.j - a.j, b.i - a.i
            ys.append(-(di + dj) / T - (cfg.n - 1))
            rs.append(dj / T)
            ds.append((dj - di) / T)
    rows = []
    for (cond, k), (val, exact) in reference_values(cfg.n, cfg.params).items():
        try:
            est = estimate(s1 if k == 1 else s2, cond, k)
        except EmptySample:
            continue
        rows.append(DriftRow(cond, k, est.mean, est.stderr, est.count, float(val), exact, est.z(float(val))))
    ys = np.array(ys)
    se = float(ys.std(ddof=1) / np.sqrt(len(ys))) if len(ys) > 1 else float("nan")
    return StudyResult(rows, float(ys.mean()) if len(ys) else float("nan"), se,
                       float(np.mean(rs)) if rs else float("nan"), float(np.mean(ds)) if ds else float("nan"),
                       len(s1))


def drift_rows_csv(rows: Sequence[DriftRow], header: str = "") -> str:
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["condition", "k_steps", "mean", "stderr", "count", "reference", "reference_kind", "z", "ok"])
    for r in rows:
        w.writerow([r.condition, r.k_steps, repr(r.mean), repr(r.stderr), r.count, repr(r.reference),
                    "exact" if r.exact else "lower_bound", repr(r.z), int(r.ok)])
    return buf.getvalue()
