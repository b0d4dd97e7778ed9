from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from hardcore_pca.core import HalfPos, SeedSpec, row_from_string, validate_noise
from hardcore_pca.islands import (
    AllBinaryRow, BadArity, EmptySample, InsufficientContext, StudyConfig, classify_right, drift_rows_csv,
    drift_study, empirical_drifts, estimate, find_islands, island_walk, modified_left, modified_right,
    planted_cells, records_csv, step_samples, track,
)
from hardcore_pca.pca import PcaSpec, all_question, run

QM = 2
TENTH = validate_noise("1/10", "1/10")


def half(v):
    return HalfPos.of(Fraction(v))


# --- find_islands -----------------------------------------------------------------

def test_single_island():
    isl = find_islands(row_from_string("?0110?"))
    assert [(x.i, x.j) for x in isl] == [(1, 4)]


def test_all_question():
    assert find_islands(all_question(10)) == []


def test_segment_reading_keeps_ends_apart():
    isl = find_islands(row_from_string("0?1"), periodic=False)
    assert [(x.i, x.j) for x in isl] == [(0, 0), (2, 2)]


def test_ring_joins_across_seam():
    isl = find_islands(row_from_string("0?1"))
    assert [(x.i, x.j) for x in isl] == [(2, 3)]  # cells 2 and 0 are neighbours on the ring


def test_all_binary_ring_rejected():
    with pytest.raises(AllBinaryRow):
        find_islands(row_from_string("0101"))


# --- modified positions and classes -----------------------------------------------

@pytest.mark.parametrize("cells, off", [((1, 1), 0), ((0, 1), 0), ((0, 0), "-1/2"), ((1, 0), -1)])
def test_modified_right_n2(cells, off):
    assert modified_right(cells, 2) == half(off)


@pytest.mark.parametrize("cells, off", [
    ((0, 0, 1), 0), ((1, 1, 1), 0), ((1, 0, 0), -2), ((0, 0, 0), -1), ((0, 1, 0), -1), ((1, 1, 0), -1),
])
def test_modified_right_n3(cells, off):
    assert modified_right(cells, 3) == half(off)


def test_modified_left_mirrors():
    assert modified_left((0, 0), 2) == half("1/2")
    assert modified_left((0, 1), 2) == half(1)
    assert modified_left((1, 0, 0), 3) == half(0)
    for cells in product((0, 1), repeat=3):
        assert modified_left(cells, 3) == -modified_right(cells[::-1], 3)


def test_context_needed():
    with pytest.raises(InsufficientContext):
        modified_right((0,), 2)


def test_classes_n3():
    assert classify_right((0, 1, 0, 0), 3) == "S1"
    assert classify_right((1, 1, 0, 0), 3) == "S1"
    assert classify_right((1, 0, 0, 0), 3) == "1000"
    assert classify_right((0, 0, 0, 0), 3) == "0000"
    assert sum(classify_right(f, 3) == "S1" for f in product((0, 1), repeat=4)) == 14


def test_bad_arity():
    with pytest.raises(BadArity):
        classify_right((0, 1, 0), 3)


# --- tracking on a ring ------------------------------------------------------------

def planted_ring(n, width=256, length=120, seed=1):
    row = all_question(width)
    row[10:10 + length] = planted_cells(SeedSpec(seed), length)
    return row


@pytest.mark.parametrize("n, step", [(2, "-1/2"), (3, -1)])
def test_noiseless_drift_is_deterministic(n, step):
    spec = PcaSpec(n, validate_noise(0, 0))
    traj = run(spec, 256, 60, planted_ring(n), SeedSpec(0))
    recs = track(traj, n)
    assert all(r.alive for r in recs)
    for a, b in zip(recs, recs[1:]):
        assert b.j_mod - a.j_mod == half(step)
    est = empirical_drifts(recs, "general" if n == 2 else "S1")
    assert est.stderr == 0 and est.mean == float(Fraction(step))


def test_records_are_islands_and_offsets_valid():
    for n, allowed in ((2, {0, -1, -2}), (3, {0, -2, -4})):
        traj = run(PcaSpec(n, TENTH), 512, 200, planted_ring(n, 512), SeedSpec(3))
        recs = track(traj, n)
        assert recs
        for r in recs:
            if not r.alive:
                continue
            row = traj.rows[r.t]
            w = len(row)
            cells = row[np.arange(r.i, r.j + 1) % w]
            assert np.all(cells != QM)
            assert row[(r.i - 1) % w] == QM and row[(r.j + 1) % w] == QM
            if r.j - r.i + 1 >= n:
                assert (r.j_mod - HalfPos.of(r.j)).doubled in allowed


def test_long_island_survives_a_step():
    for n in (2, 3):
        traj = run(PcaSpec(n, validate_noise("1/4", "1/4")), 512, 1, planted_ring(n, 512), SeedSpec(4))
        recs = track(traj, n)
        assert len(recs) == 2 and recs[1].alive


def test_islands_appear_from_question():
    p = validate_noise(0.25, 0.25)
    found = 0
    for k in range(20):
        traj = run(PcaSpec(2, p), 256, 30, all_question(256), SeedSpec(5, k))
        found += any(find_islands(r) for r in traj.rows[1:] if (r == QM).any())
    assert found == 20


# --- isolated walk and drift estimates --------------------------------------------

def test_walk_noiseless_matches_ring():
    cells = planted_cells(SeedSpec(7), 60)
    recs = island_walk(2, validate_noise(0, 0), SeedSpec(7), 40, cells)
    assert [r.j_mod.doubled for r in recs][:5] == [recs[0].j_mod.doubled - k for k in range(5)]


def test_empty_sample():
    with pytest.raises(EmptySample):
        estimate([], "S1", 1)


def test_two_step_pairs_are_disjoint():
    recs = island_walk(2, TENTH, SeedSpec(8), 50, planted_cells(SeedSpec(8), 32))
    one, two = step_samples(recs, 1), step_samples(recs, 2)
    assert len(two) <= len(one) // 2 + 1


def test_general_class_near_exact():
    res = drift_study(StudyConfig(2, TENTH, 120, 200, seed=21))
    row = next(r for r in res.rows if r.condition == "general")
    assert row.reference == -0.205
    assert abs(row.z) < 3


def test_noiseless_study_all_z_zero():
    for n in (2, 3):
        res = drift_study(StudyConfig(n, validate_noise(0, 0), 5, 60, seed=2))
        assert res.rows and all(r.z == 0 and r.stderr == 0 for r in res.rows)
        assert res.symmetry_mean == 0


def test_symmetry_identity_small():
    res = drift_study(StudyConfig(2, TENTH, 150, 200, seed=13))
    assert abs(res.symmetry_mean) < 3 * res.symmetry_stderr + 1e-12


def test_csv_outputs():
    sink = []
    res = drift_study(StudyConfig(3, TENTH, 3, 40, seed=1), sink)
    text = drift_rows_csv(res.rows, "hello")
    assert text.startswith("# hello\ncondition,")
    recs = [r for _, rs in sink for r in rs]
    rc = records_csv(recs, trials=[k for k, rs in sink for _ in rs])
    assert rc.count("\n") == len(recs) + 1
