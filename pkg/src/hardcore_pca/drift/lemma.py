"""Min-max drift bound for a Markov-modulated walk, and its waiting-chain proof device.

A walk (j_t, f_t) on Z x F whose increment law depends only on f_t has
asymptotic drift R >= min_f max(E[J | f], E[J + J' | f] / 2).  The auxiliary
chain below realises the bound: states where the two-step mean is better wait
one step and then move by two steps' worth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from ..symbolic import RatFnQ

Law = list[tuple[Fraction, Fraction]]  # (jump value, probability)


class InvalidChain(ValueError):
    pass


@dataclass
class ChainSpec:
    states: tuple[str, ...]
    transition: dict[str, dict[str, Fraction]]
    drift1: dict[str, Fraction]
    drift2: dict[str, Fraction]
    jumps: Optional[dict[tuple[str, str], Law]] = field(default=None)

    def __post_init__(self):
        for f in self.states:
            row = self.transition.get(f, {})
            if any(p < 0 for p in row.values()):
                raise InvalidChain(f"negative transition probability from {f}")
            if sum(row.values(), Fraction(0)) != 1:
                raise InvalidChain(f"row {f} does not sum to 1")
            if set(row) - set(self.states):
                raise InvalidChain(f"row {f} leaves the state set")
        if self.jumps is not None:
            for (f, g), law in self.jumps.items():
                if sum((p for _, p in law), Fraction(0)) != 1:
                    raise InvalidChain(f"jump law {f}->{g} does not sum to 1")

    @classmethod
    def from_jumps(cls, states, transition, jumps) -> "ChainSpec":
        """Build drifts from per-transition jump laws (exact)."""
        states = tuple(states)
        tr = {f: {g: Fraction(p) for g, p in transition[f].items()} for f in states}
        jl = {k: [(Fraction(v), Fraction(p)) for v, p in law] for k, law in jumps.items()}
        d1 = {}
        for f in states:
            d1[f] = sum(
                (p * sum((v * q for v, q in jl[(f, g)]), Fraction(0)) for g, p in tr[f].items() if p),
                Fraction(0),
            )
        d2 = {f: d1[f] + sum((p * d1[g] for g, p in tr[f].items()), Fraction(0)) for f in states}
        return cls(states, tr, d1, d2, jl)

    def split(self) -> tuple[set[str], set[str]]:
        """F1 (one step is at least as good) and F2 (two steps are better)."""
        f1 = {f for f in self.states if self.drift1[f] >= self.drift2[f] / 2}
        return f1, set(self.states) - f1


def minmax_from_values(drift1: Mapping, drift2: Mapping | None = None):
    """min over classes of max(drift1, drift2 / 2); a class without drift2 uses drift1."""
    drift2 = drift2 or {}
    vals = []
    for f, d in drift1.items():
        v = d
        if f in drift2 and drift2[f] is not None:
            half = drift2[f] / 2
            v = half if half > v else v
        vals.append(v)
    return min(vals)


def minmax_bound(spec: ChainSpec) -> Fraction:
    return minmax_from_values(spec.drift1, spec.drift2)


@dataclass(frozen=True)
class GoalVerdict:
    passed: bool
    bound: Fraction
    threshold: Fraction

    def __str__(self):
        return f"{'Pass' if self.passed else 'Fail'} (bound {self.bound} vs {self.threshold})"


def goal_check(bound, n: int) -> GoalVerdict:
    """Positive island growth needs R > -(n-1)/2."""
    thr = Fraction(-(n - 1), 2)
    return GoalVerdict(bound > thr, bound, thr)


def stationary_distribution(spec: ChainSpec) -> dict[str, Fraction]:
    """Exact solution of pi P = pi, sum pi = 1 (chain assumed irreducible)."""
    idx = {f: i for i, f in enumerate(spec.states)}
    m = len(spec.states)
    # rows: (P^T - I) pi = 0 for all but one equation, plus normalisation
    a = [[Fraction(0)] * (m + 1) for _ in range(m)]
    for f in spec.states:
        for g, p in spec.transition[f].items():
            a[idx[g]][idx[f]] += p
    for i in range(m):
        a[i][i] -= 1
    a[-1] = [Fraction(1)] * m + [Fraction(1)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col] != 0), None)
        if piv is None:
            raise InvalidChain("chain is not irreducible")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(m):
            if r != col and a[r][col] != 0:
                k = a[r][col]
                a[r] = [vr - k * vc for vr, vc in zip(a[r], a[col])]
    return {f: a[idx[f]][m] for f in spec.states}


def stationary_drift(spec: ChainSpec) -> Fraction:
    pi = stationary_distribution(spec)
    return sum((pi[f] * spec.drift1[f] for f in spec.states), Fraction(0))


@dataclass
class AuxResult:
    R_hat: float
    R: float
    R_stderr: float
    tau: dict[tuple[str, int], float]
    tau_stderr: dict[tuple[str, int], float]
    F1: set[str]
    F2: set[str]
    steps: int
    jhat_equals_j: bool  # True when the two walks coincide at every step


def _batch_stderr(x: np.ndarray, batches: int = 100) -> float:
    n = len(x) // batches
    if n < 2:
        return float(np.std(x) / np.sqrt(max(len(x), 1)))
    means = x[: n * batches].reshape(batches, n).mean(axis=1)
    return float(means.std(ddof=1) / np.sqrt(batches))


def aux_chain_simulate(spec: ChainSpec, T: int, seed: int, start: str | None = None) -> AuxResult:
    """Simulate (j, f) and the waiting chain (jhat, fhat, w) on one path."""
    if spec.jumps is None:
        raise InvalidChain("simulation needs jump laws")
    rng = np.random.default_rng(seed)
    F1, F2 = spec.split()
    states = spec.states
    sidx = {f: i for i, f in enumerate(states)}
    # joint table per source: (next state index, jump value) with cumulative probabilities
    tables = []
    for f in states:
        outs, probs = [], []
        for g, p in spec.transition[f].items():
            if p == 0:
                continue
            for v, q in spec.jumps[(f, g)]:
                outs.append((sidx[g], float(v)))
                probs.append(float(p * q))
        tables.append((outs, np.cumsum(probs)))
    in_f2 = [f in F2 for f in states]

    u = rng.random(T)
    f = sidx[start] if start is not None else 0
    j = 0.0
    jh, fh, w = 0.0, f, int(in_f2[f])
    J = np.empty(T)
    Jh = np.empty(T)
    occ = np.zeros((len(states), 2), dtype=np.int64)
    occ_series = np.zeros((T, len(states) * 2), dtype=np.bool_) if T <= 2_000_000 else None
    same = True
    for t in range(T):
        occ[fh, w] += 1
        if occ_series is not None:
            occ_series[t, 2 * fh + w] = True
        outs, cum = tables[f]
        k = int(np.searchsorted(cum, u[t] * cum[-1], side="right"))
        g, dj = outs[min(k, len(outs) - 1)]
        jn = j + dj
        if w == 0:
            jhn, fhn, wn = jn, g, int(in_f2[g])
        else:
            jhn, fhn, wn = j, f, 0
        J[t] = dj
        Jh[t] = jhn - jh
        same = same and jhn == jn
        j, f, jh, fh, w = jn, g, jhn, fhn, wn

    tau, tau_se = {}, {}
    for f_name, i in sidx.items():
        for ww in (0, 1):
            tau[(f_name, ww)] = occ[i, ww] / T
            if occ_series is not None:
                tau_se[(f_name, ww)] = _batch_stderr(occ_series[:, 2 * i + ww].astype(float))
            else:
                p = occ[i, ww] / T
                tau_se[(f_name, ww)] = float(np.sqrt(p * (1 - p) / T))
    return AuxResult(
        R_hat=float(Jh.sum() / T),
        R=float(J.sum() / T),
        R_stderr=_batch_stderr(J),
        tau=tau,
        tau_stderr=tau_se,
        F1=F1,
        F2=F2,
        steps=T,
        jhat_equals_j=same,
    )


def two_state_fixture() -> ChainSpec:
    """a -> b -> a alternation; jumps of mean -1 out of a and +2 out of b."""
    half = Fraction(1, 2)
    return ChainSpec.from_jumps(
        ("a", "b"),
        {"a": {"b": 1}, "b": {"a": 1}},
        {("a", "b"): [(-2, half), (0, half)], ("b", "a"): [(1, half), (3, half)]},
    )


# --- the island class systems --------------------------------------------------

@lru_cache(maxsize=None)
def class_system_values(n: int):
    """Symbolic (drift1, drift2) per boundary class for the island walk.

    Values are exact for S1 / general n=2 classes and lower bounds elsewhere.
    For 0000 the two-step value is the pointwise minimum of the two branches,
    returned as a pair.
    """
    from . import drifts

    if n == 2:
        g = drifts.drift1_n2_general()
        return (
            {"01": g, "10": g, "11": g, "00": drifts.drift1_n2_00_bound()},
            {"00": drifts.drift2_n2_00()},
        )
    if n == 3:
        d0, d1 = drifts.drift2_n3_0000()
        return (
            {"S1": drifts.drift1_n3_S1(), "1000": drifts.drift1_n3_1000(),
             "0000": drifts.drift1_n3_0000_bound()},
            {"1000": drifts.drift2_n3_1000(), "0000": (d0, d1)},
        )
    raise ValueError("class systems exist for n = 2 and n = 3 only")


def class_system_bound(n: int, e0, e1) -> GoalVerdict:
    """Evaluate the min-max bound of the island class system at (e0, e1)."""
    d1s, d2s = class_system_values(n)

    def ev(v):
        if isinstance(v, tuple):
            return min(ev(x) for x in v)
        return v.eval_at(e0, e1) if isinstance(v, RatFnQ) else Fraction(v)

    b = minmax_from_values({k: ev(v) for k, v in d1s.items()}, {k: ev(v) for k, v in d2s.items()})
    return goal_check(b, n)
