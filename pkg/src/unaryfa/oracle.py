"""Brute-force reference implementations.

Nothing in here calls the decision procedures or constructions it is used
to check. Bits are numpy bool arrays rather than the packed integers used
elsewhere, so the two paths share no arithmetic.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .core import Bits, ChrobakNF, UnaryNfa, WitnessLength
from .errors import GuardExceeded, Inexact, NoPeriodInWindow, TooLarge
from .numtheory import divisors

DEFAULT_CAP = 10**5
WINDOW_GUARD = 10**8


@dataclass(frozen=True)
class TrajectoryResult:
    bits: np.ndarray
    threshold: int
    period: int
    exact: bool

    def extend(self, n: int) -> np.ndarray:
        """Bits for lengths 0 .. n-1, unrolled through the period."""
        if not self.exact:
            if n > len(self.bits):
                raise Inexact("trajectory did not close; cannot extend")
            return self.bits[:n]
        if n <= len(self.bits):
            return self.bits[:n]
        head = self.bits[: self.threshold]
        cyc = self.bits[self.threshold : self.threshold + self.period]
        reps = -(-(n - self.threshold) // self.period)
        return np.concatenate([head, np.tile(cyc, reps)])[:n]


class Relation(enum.Enum):
    SUBSET = "subset"
    EQUAL = "equal"
    UNIVERSAL = "universal"


@dataclass(frozen=True)
class OracleVerdict:
    holds: bool
    witness: Optional[WitnessLength] = None


def _nfa_trajectory(a: UnaryNfa, cap: int) -> TrajectoryResult:
    seen = {}
    flags = []
    current = frozenset(a.starts)
    for step in range(cap):
        if current in seen:
            start = seen[current]
            return TrajectoryResult(np.array(flags, dtype=bool), start, step - start, True)
        seen[current] = step
        flags.append(any(q in a.accepts for q in current))
        nxt = set()
        for q in current:
            nxt.update(a.succ[q])
        current = frozenset(nxt)
    return TrajectoryResult(np.array(flags, dtype=bool), 0, 0, False)


def _chrobak_trajectory(c: ChrobakNF, cap: int) -> TrajectoryResult:
    # subset after the stem is {(i, (l - s) mod p_i)}: it first repeats after lcm steps
    s = len(c.stem)
    lengths = [len(cyc) for cyc in c.cycles]
    period = math.lcm(*lengths) if lengths else 1
    total = s + period
    exact = total <= cap
    n = total if exact else cap
    out = np.zeros(n, dtype=bool)
    stem = np.array([ch == "1" for ch in str(c.stem)], dtype=bool)
    out[: min(s, n)] = stem[: min(s, n)]
    tail = n - s
    if tail > 0:
        for cyc in c.cycles:
            pattern = np.array([ch == "1" for ch in str(cyc)], dtype=bool)
            reps = -(-tail // len(pattern))
            out[s:] |= np.tile(pattern, reps)[:tail]
    if not exact:
        return TrajectoryResult(out, 0, 0, False)
    return TrajectoryResult(out, s, period, True)


def oracle_bits(a: Union[UnaryNfa, ChrobakNF], cap: int = DEFAULT_CAP) -> TrajectoryResult:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if isinstance(a, ChrobakNF):
        return _chrobak_trajectory(a, cap)
    return _nfa_trajectory(a, cap)


def oracle_relation(rel, a, b=None, cap: int = DEFAULT_CAP) -> OracleVerdict:
    """Decide subset / equality / universality by pointwise comparison."""
    rel = Relation(rel) if not isinstance(rel, Relation) else rel
    ta = oracle_bits(a, cap)
    if not ta.exact:
        raise Inexact("first trajectory did not close within cap")
    if rel is Relation.UNIVERSAL:
        tb = TrajectoryResult(np.ones(1, dtype=bool), 0, 1, True)
        ta, tb = tb, ta  # universal(a) == subset(all, a)
    else:
        tb = oracle_bits(b, cap)
        if not tb.exact:
            raise Inexact("second trajectory did not close within cap")
    window = max(ta.threshold, tb.threshold) + math.lcm(ta.period, tb.period)
    if window > WINDOW_GUARD:
        raise GuardExceeded(f"oracle window {window} too large")
    xa, xb = ta.extend(window), tb.extend(window)
    if rel is Relation.EQUAL:
        bad = xa != xb
    else:
        bad = xa & ~xb
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return OracleVerdict(True)
    return OracleVerdict(False, WitnessLength(int(idx[0])))


def oracle_concat(xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
    """Naive boolean convolution: out[x] iff xa[y] and xb[x - y] for some y."""
    n = min(len(xa), len(xb))
    out = np.zeros(n, dtype=bool)
    for y in np.flatnonzero(xb[:n]):
        out[y:] |= xa[: n - y]
    return out


def brute_sat(cnf, limit: int = 25):
    """First model in lexicographic order (x1 most significant, False < True)."""
    n = cnf.num_vars
    if n > limit:
        raise TooLarge(f"{n} variables exceeds brute-force limit {limit}")
    for values in itertools.product((False, True), repeat=n):
        if all(any(values[abs(l) - 1] == (l > 0) for l in clause) for clause in cnf.clauses):
            return values
    return None


def _is_period(arr: np.ndarray, threshold: int, p: int) -> bool:
    tail = arr[threshold:]
    return bool(np.array_equal(tail[:-p], tail[p:]))


def minimal_period(bits, threshold: int = 0, hint: Optional[int] = None) -> int:
    """Least p with bits[l] == bits[l + p] for every in-window l >= threshold.

    Only periods that fit at least twice into the window are considered.
    With `hint` (a period known to hold on a window at least twice its
    size) only divisors of the hint are tried, which is exact by the
    Fine-Wilf theorem.
    """
    if isinstance(bits, str):
        bits = Bits.from_str(bits)
    arr = np.asarray(bits.to_array() if hasattr(bits, "to_array") else bits, dtype=bool)
    span = len(arr) - threshold
    if span < 2:
        raise NoPeriodInWindow("window too short")
    candidates = divisors(hint) if hint else range(1, span // 2 + 1)
    for p in candidates:
        if 2 * p > span:
            break
        if _is_period(arr, threshold, p):
            return p
    raise NoPeriodInWindow(f"no period fits twice in a window of {span}")
