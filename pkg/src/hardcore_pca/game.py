"""Percolation game: random boards, outcomes under optimal play, draw frequency.

A token at (i, j) may move to (i + k, j + 1) for 0 <= k < n, columns wrapping.
Outcome codes follow the envelope alphabet: a trap gives 1, a target gives 0,
an open site gives 0 when some move reaches a 1, 1 when every move reaches a
0, and ? otherwise.  Above the top row sits a virtual all-? row, so an open
site on the top row is a draw.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from .core import LABEL_CHARS, STATE_CHARS, Label, NoiseParams, SeedSpec, site_labels, uniforms

QM = 2


@dataclass
class Board:
    width: int
    height: int
    n: int
    labels: np.ndarray  # (height, width) uint8 of Label; row 0 at the bottom
    params: NoiseParams
    seed: SeedSpec

    def dump(self) -> str:
        """Text grid over {T, G, .}, top row first."""
        return "\n".join("".join(LABEL_CHARS[c] for c in row) for row in self.labels[::-1])


def generate_board(width: int, height: int, params: NoiseParams, n: int, seed: SeedSpec) -> Board:
    if width < n or height < 1:
        raise ValueError(f"board {width}x{height} too small for n={n}")
    rows = np.arange(height)[:, None]
    cols = np.arange(width)[None, :]
    labels = site_labels(params, seed.draws(rows, cols))
    return Board(width, height, n, labels, params, seed)


def solve_board(board: Board) -> np.ndarray:
    """Outcome grid by backward induction, one cell at a time (reference solver)."""
    w, h, n = board.width, board.height, board.n
    out = np.full((h, w), QM, dtype=np.uint8)
    above = [QM] * w
    for j in range(h - 1, -1, -1):
        lab = board.labels[j]
        cur = [QM] * w
        for i in range(w):
            if lab[i] == Label.TRAP:
                cur[i] = 1
            elif lab[i] == Label.TARGET:
                cur[i] = 0
            else:
                succ = [above[(i + k) % w] for k in range(n)]
                if 1 in succ:
                    cur[i] = 0
                elif all(s == 0 for s in succ):
                    cur[i] = 1
                else:
                    cur[i] = QM
        out[j] = cur
        above = cur
    return out


def grid_to_text(grid: np.ndarray) -> str:
    return "\n".join("".join(STATE_CHARS[c] for c in row) for row in grid[::-1])


def _solve_batch(labels: np.ndarray, n: int) -> np.ndarray:
    """Bottom-row outcomes for a stack of boards, labels shape (B, height, width)."""
    b, h, w = labels.shape
    state = np.full((b, w), QM, dtype=np.uint8)
    for j in range(h - 1, -1, -1):
        win1 = np.zeros((b, w), dtype=bool)
        win0 = np.ones((b, w), dtype=bool)
        for k in range(n):
            s = np.roll(state, -k, axis=1)
            win1 |= s == 1
            win0 &= s == 0
        lab = labels[:, j, :]
        nxt = np.where(win1, 0, np.where(win0, 1, QM)).astype(np.uint8)
        nxt[lab == Label.TARGET] = 0
        nxt[lab == Label.TRAP] = 1
        state = nxt
    return state


@dataclass
class DrawEstimate:
    height: int
    trials: int
    draws: int
    estimate: float
    ci_low: float
    ci_high: float


def draw_probability(width: int, height: int, params: NoiseParams, n: int, trials: int,
                     seed: int, batch: int = 250) -> DrawEstimate:
    """Fraction of boards whose bottom-centre site is a draw, with a 95% Wilson interval."""
    if trials < 1:
        raise ValueError("need at least one trial")
    origin = width // 2
    draws = 0
    rows = np.arange(height)[None, :, None]
    cols = np.arange(width)[None, None, :]
    for start in range(0, trials, batch):
        tr = np.arange(start, min(trials, start + batch))[:, None, None]
        labels = site_labels(params, uniforms(seed, tr, rows, cols))
        bottom = _solve_batch(labels, n)
        draws += int(np.sum(bottom[:, origin] == QM))
    ci = binomtest(draws, trials).proportion_ci(0.95, method="wilson")
    return DrawEstimate(height, trials, draws, draws / trials, float(ci.low), float(ci.high))


def board_as_envelope_keys(height: int) -> list[int]:
    """Time keys that make an envelope run from all-? consume the board rows top-down.

    Envelope row s (s >= 1) then equals outcome row height - s.
    """
    return [height - 1 - t for t in range(height)]


def draw_csv(estimates, header: str = "") -> str:
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["height", "trials", "draw_estimate", "ci_low", "ci_high"])
    for e in estimates:
        wr.writerow([e.height, e.trials, repr(e.estimate), repr(e.ci_low), repr(e.ci_high)])
    return buf.getvalue()


ASSORTED_NOISE = (("1/10", "1/10"), ("1/4", "1/10"), ("1/10", "1/4"), ("0", "1/5"), ("1/5", "0"), ("1/3", "1/3"))


@dataclass
class EquivalenceResult:
    boards: int
    sites: int
    mismatches: int
    first: tuple | None  # (board, row, col) of the first disagreement

    @property
    def identical(self) -> bool:
        return self.mismatches == 0


def equivalence_check(boards: int, width: int, height: int, n: int, seed: int,
                      noise=ASSORTED_NOISE) -> EquivalenceResult:
    """Compare solve_board with an envelope run that reads the board rows top-down."""
    from .core import validate_noise
    from .pca import PcaSpec, all_question, run

    keys = board_as_envelope_keys(height)
    bad, first = 0, None
    for b in range(boards):
        params = validate_noise(*noise[b % len(noise)])
        sd = SeedSpec(seed, b)
        grid = solve_board(generate_board(width, height, params, n, sd))
        traj = run(PcaSpec(n, params), width, height, all_question(width), sd, time_keys=keys, min_width=n)
        env = traj.rows[1:][::-1]  # env[k] is envelope row height - k, i.e. board row k
        diff = env != grid
        if diff.any():
            bad += int(diff.sum())
            if first is None:
                r, c = np.argwhere(diff)[0]
                first = (b, int(r), int(c))
    return EquivalenceResult(boards, boards * width * height, bad, first)
