"""Hard-core PCA and its envelope on a periodic ring."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import EnvState, Label, NoiseParams, SeedSpec, row_to_string, site_labels

ZERO, ONE, QM = np.uint8(0), np.uint8(1), np.uint8(2)


class QuestionInBinary(ValueError):
    pass


class WidthTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class PcaSpec:
    n: int
    params: NoiseParams

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("neighbourhood size must be at least 2")


def _window_flags(row: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(some cell of window i..i+n-1 is 1, every cell of it is 0), periodic."""
    any1 = row == ONE
    all0 = row == ZERO
    for k in range(1, n):
        sh = np.roll(row, -k, axis=-1)
        any1 = any1 | (sh == ONE)
        all0 = all0 & (sh == ZERO)
    return any1, all0


def apply_labels(row: np.ndarray, labels: np.ndarray, n: int) -> np.ndarray:
    """Quenched envelope update: trap -> 1, target -> 0, open -> NOR of the window or ?."""
    any1, all0 = _window_flags(row, n)
    out = np.full(row.shape, QM, dtype=np.uint8)
    out[all0] = ONE
    out[any1] = ZERO
    out[labels == Label.TARGET] = ZERO
    out[labels == Label.TRAP] = ONE
    return out


def envelope_step(row: np.ndarray, spec: PcaSpec, u: np.ndarray) -> np.ndarray:
    """One step of E_n given one uniform per cell."""
    return apply_labels(np.asarray(row, dtype=np.uint8), site_labels(spec.params, u), spec.n)


def hardcore_step(row: np.ndarray, spec: PcaSpec, u: np.ndarray) -> np.ndarray:
    """One step of H_n given one uniform per cell; the row must be binary."""
    row = np.asarray(row, dtype=np.uint8)
    if np.any(row == QM):
        raise QuestionInBinary("hard-core rows cannot contain ?")
    return envelope_step(row, spec, u)


@dataclass
class Trajectory:
    spec: PcaSpec
    rows: np.ndarray  # (T+1, width) uint8
    seed: SeedSpec
    time_keys: Optional[Sequence[int]] = field(default=None)

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    @property
    def steps(self) -> int:
        return self.rows.shape[0] - 1

    def row_strings(self) -> list[str]:
        return [row_to_string(r) for r in self.rows]


def run(spec: PcaSpec, width: int, T: int, init, seed: SeedSpec,
        time_keys: Optional[Sequence[int]] = None, min_width: int = 64) -> Trajectory:
    """T steps of E_n from ``init``; step t -> t+1 draws with key ``time_keys[t]`` (default t)."""
    if width < max(spec.n, min_width):
        raise WidthTooSmall(f"width {width} < max(n, {min_width})")
    init = np.asarray(init, dtype=np.uint8)
    if init.shape != (width,):
        raise ValueError(f"initial row has shape {init.shape}, expected ({width},)")
    if time_keys is not None and len(time_keys) < T:
        raise ValueError("need one time key per step")
    rows = np.empty((T + 1, width), dtype=np.uint8)
    rows[0] = init
    cells = np.arange(width)
    for t in range(T):
        key = t if time_keys is None else time_keys[t]
        rows[t + 1] = envelope_step(rows[t], spec, seed.draws(key, cells))
    return Trajectory(spec, rows, seed, time_keys)


def all_question(width: int) -> np.ndarray:
    return np.full(width, QM, dtype=np.uint8)


def question_density(traj: Trajectory) -> np.ndarray:
    return (traj.rows == QM).mean(axis=1)


def one_density(traj: Trajectory) -> np.ndarray:
    return (traj.rows == ONE).mean(axis=1)


def density_run(spec: PcaSpec, width: int, T: int, init, seed: SeedSpec) -> np.ndarray:
    """?-density series without keeping the rows (for long runs)."""
    row = np.asarray(init, dtype=np.uint8)
    if width < max(spec.n, 64):
        raise WidthTooSmall(f"width {width} < max(n, 64)")
    cells = np.arange(width)
    out = np.empty((T + 1, 2))
    out[0] = (row == QM).mean(), (row == ONE).mean()
    for t in range(T):
        row = envelope_step(row, spec, seed.draws(t, cells))
        out[t + 1] = (row == QM).mean(), (row == ONE).mean()
    return out


def trajectory_csv(densities: np.ndarray, header: str = "") -> str:
    """CSV text with columns t, density_question, density_one."""
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "density_question", "density_one"])
    for t, (q, o) in enumerate(densities):
        w.writerow([t, repr(float(q)), repr(float(o))])
    return buf.getvalue()
