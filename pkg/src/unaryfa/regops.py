"""Regular operations on unary automata, with their size-bounded constructions."""

from __future__ import annotations

import heapq
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Union

import numpy as np

from .chrobak import DEFAULT_GUARD, equalize_stems, nfa_to_chrobak, normalize, pad_stem
from .core import Bits, ChrobakNF, UnaryNfa, ambiguity_chrobak, membership_bits
from .errors import AmbiguousInput, GuardExceeded, RecursionOverflow, StructureViolation
from .numtheory import ceil_log2, lcm_guarded
from .oracle import minimal_period


@dataclass(frozen=True)
class ResidueNode:
    d: int
    k: int
    depth: int


@dataclass(frozen=True)
class OpReport:
    output: Union[ChrobakNF, UnaryNfa]
    input_sizes: tuple
    output_size: int
    elapsed: float


def size_of(x) -> int:
    return x.num_states


def timed(op, *args, **kwargs) -> OpReport:
    start = time.perf_counter()
    out = op(*args, **kwargs)
    elapsed = time.perf_counter() - start
    sizes = tuple(size_of(a) for a in args if isinstance(a, (ChrobakNF, UnaryNfa)))
    return OpReport(out, sizes, size_of(out), elapsed)


def require_unambiguous(c: ChrobakNF, what: str = "input") -> None:
    report = ambiguity_chrobak(c)
    if not report.unambiguous:
        raise AmbiguousInput(
            f"{what} is ambiguous (two runs accept length {report.witness.value})",
            report.witness,
        )


# -- complementation ---------------------------------------------------------


class _CycleView:
    """Accepting positions of one cycle, grouped by residue on demand."""

    def __init__(self, cyc: Bits):
        self.length = cyc.length
        self.arr = cyc.to_array()
        self._cache: dict[int, np.ndarray] = {}

    def by_residue(self, g: int) -> np.ndarray:
        """counts[c] = accepting positions congruent to c mod g."""
        if g not in self._cache:
            self._cache[g] = self.arr.reshape(self.length // g, g).sum(axis=0)
        return self._cache[g]

    def classify(self, d: int, k: int) -> str:
        g = math.gcd(d, self.length)
        hits = int(self.by_residue(g)[k % g])
        if hits == 0:
            return "none"
        if hits == self.length // g:
            return "all"
        return "some"


def complement_ufa(c: ChrobakNF) -> ChrobakNF:
    """Complement of an unambiguous Chrobak automaton.

    The stem is flipped; the cycle part is split into residue classes
    (d, k) of word lengths measured from the end of the stem.
    """
    require_unambiguous(c)
    views = [_CycleView(cyc) for cyc in c.cycles]
    # shortest cycle first, ties by index
    order = sorted(range(len(views)), key=lambda i: (views[i].length, i))
    n = max(c.num_states, 2)
    max_depth = ceil_log2(n) + 2
    emitted: dict[int, set] = {}

    def visit(node: ResidueNode):
        if node.depth > max_depth:
            raise RecursionOverflow(f"depth {node.depth} exceeds {max_depth} for n={n}")
        kinds = [views[i].classify(node.d, node.k) for i in order]
        if "all" in kinds:
            return
        partial = [order[j] for j, kind in enumerate(kinds) if kind == "some"]
        if not partial:
            emitted.setdefault(node.d, set()).add(node.k)
            return
        chosen = views[partial[0]]
        d2 = math.lcm(node.d, chosen.length)
        for s in range(d2 // node.d):
            visit(ResidueNode(d2, node.k + s * node.d, node.depth + 1))

    visit(ResidueNode(1, 0, 0))
    cycles = tuple(Bits.from_positions(ks, d) for d, ks in sorted(emitted.items()))
    return ChrobakNF(~c.stem, cycles)


# -- products and unions -----------------------------------------------------


def intersect(a: UnaryNfa, b: UnaryNfa) -> UnaryNfa:
    """Product automaton on the reachable state pairs."""
    index = {}
    queue = deque()
    for p in sorted(a.starts):
        for q in sorted(b.starts):
            index[(p, q)] = len(index)
            queue.append((p, q))
    edges = []
    while queue:
        p, q = queue.popleft()
        src = index[(p, q)]
        for p2 in sorted(a.succ[p]):
            for q2 in sorted(b.succ[q]):
                if (p2, q2) not in index:
                    index[(p2, q2)] = len(index)
                    queue.append((p2, q2))
                edges.append((src, index[(p2, q2)]))
    starts = range(len(a.starts) * len(b.starts))
    accepts = [i for (p, q), i in index.items() if p in a.accepts and q in b.accepts]
    return UnaryNfa.from_edges(len(index), starts, accepts, edges)


def disjoint_union(a: UnaryNfa, b: UnaryNfa) -> UnaryNfa:
    """Side-by-side union; unambiguous when the two languages are disjoint."""
    off = a.num_states
    edges = a.edges() + [(u + off, v + off) for u, v in b.edges()]
    starts = set(a.starts) | {q + off for q in b.starts}
    accepts = set(a.accepts) | {q + off for q in b.accepts}
    return UnaryNfa.from_edges(off + b.num_states, starts, accepts, edges)


def intersect_chrobak(c1: ChrobakNF, c2: ChrobakNF) -> ChrobakNF:
    """Reachable product of two Chrobak automata, itself in Chrobak form."""
    c1, c2 = equalize_stems(c1, c2)
    cycles = []
    for x in c1.cycles:
        for y in c2.cycles:
            n = math.lcm(x.length, y.length)
            both = x.tile(n) & y.tile(n)
            if both.any():
                cycles.append(both)
    return normalize(ChrobakNF(c1.stem & c2.stem, tuple(cycles)))


def union_disjoint_chrobak(c1: ChrobakNF, c2: ChrobakNF) -> ChrobakNF:
    c1, c2 = equalize_stems(c1, c2)
    return normalize(ChrobakNF(c1.stem | c2.stem, c1.cycles + c2.cycles))


def union_ufa(c1: ChrobakNF, c2: ChrobakNF) -> ChrobakNF:
    """L1 united with (L2 minus L1), which keeps the result unambiguous."""
    require_unambiguous(c1, "first input")
    require_unambiguous(c2, "second input")
    rest = intersect_chrobak(complement_ufa(c1), c2)
    return union_disjoint_chrobak(c1, rest)


def symdiff_ufa(c1: ChrobakNF, c2: ChrobakNF) -> ChrobakNF:
    require_unambiguous(c1, "first input")
    require_unambiguous(c2, "second input")
    left = intersect_chrobak(c1, complement_ufa(c2))
    right = intersect_chrobak(c2, complement_ufa(c1))
    return union_disjoint_chrobak(left, right)


# -- concatenation -----------------------------------------------------------


def concat_nfa(a: UnaryNfa, b: UnaryNfa) -> UnaryNfa:
    """Concatenation with |a| + |b| states and no epsilon moves."""
    off = a.num_states
    edges = a.edges() + [(u + off, v + off) for u, v in b.edges()]
    first_steps = set()
    for q in b.starts:
        first_steps |= b.succ[q]
    edges += [(f, t + off) for f in sorted(a.accepts) for t in sorted(first_steps)]
    accepts = {q + off for q in b.accepts}
    if b.accepts_empty():
        accepts |= set(a.accepts)
    starts = set(a.starts)
    if a.accepts_empty():
        starts |= {q + off for q in b.starts}
    return UnaryNfa.from_edges(off + b.num_states, starts, accepts, edges)


def shift(c: ChrobakNF, k: int) -> ChrobakNF:
    """Automaton for {l + k : l in L(c)}."""
    return ChrobakNF(Bits.zeros(k).concat(c.stem), c.cycles)


def union_chrobak(parts) -> ChrobakNF:
    """Plain union by shared stem and side-by-side cycles (may be ambiguous)."""
    parts = list(parts)
    if not parts:
        return ChrobakNF.empty()
    target = max(p.stem.length for p in parts)
    padded = [pad_stem(p, target) for p in parts]
    stem = Bits.zeros(target)
    for p in padded:
        stem = stem | p.stem
    return normalize(ChrobakNF(stem, tuple(c for p in padded for c in p.cycles)))


def concat_finite(c: ChrobakNF, lengths) -> ChrobakNF:
    """L(c) concatenated with a finite set of lengths, as a union of shifts."""
    return union_chrobak(shift(c, k) for k in sorted(set(lengths)))


def concat_chrobak(c1: ChrobakNF, c2: ChrobakNF, guard: int = DEFAULT_GUARD) -> ChrobakNF:
    """Concatenation; finite operands avoid the DFA-sized convolution."""
    f1, f2 = normalize(c1), normalize(c2)
    if not f2.cycles:
        return concat_finite(c1, f2.stem.positions())
    if not f1.cycles:
        return concat_finite(c2, f1.stem.positions())
    return concat_via_bits(c1, c2, guard)


def _bool_convolve(x: np.ndarray, y: np.ndarray, n: int) -> np.ndarray:
    """out[i] = OR_j x[j] and y[i - j], for i < n."""
    x = x[:n].astype(np.float64)
    y = y[:n].astype(np.float64)
    if min(len(x), len(y)) < 64:
        full = np.convolve(x, y)
    else:
        size = 1 << (len(x) + len(y) - 1).bit_length()
        full = np.fft.irfft(np.fft.rfft(x, size) * np.fft.rfft(y, size), size)
    out = np.zeros(n, dtype=bool)
    m = min(n, len(full))
    out[:m] = full[:m] > 0.5
    return out


def eventual_form(arr: np.ndarray, from_index: int, period_hint: int) -> ChrobakNF:
    """Smallest stem + single cycle matching bits that are periodic past from_index.

    `arr` must cover at least from_index + 2 * period_hint positions.
    """
    period = minimal_period(arr, from_index, hint=period_hint)
    start = from_index
    while start > 0 and arr[start - 1] == arr[start - 1 + period]:
        start -= 1
    stem = Bits.from_array(arr[:start])
    cyc = Bits.from_array(arr[start : start + period])
    return ChrobakNF(stem, (cyc,) if cyc.any() else ())


def concat_via_bits(c1: ChrobakNF, c2: ChrobakNF, guard: int = DEFAULT_GUARD) -> ChrobakNF:
    """Exact concatenation as a DFA-shaped Chrobak automaton."""
    big = lcm_guarded(c1.cycle_lengths + c2.cycle_lengths, guard)
    if big is None:
        raise GuardExceeded(f"lcm of cycle lengths exceeds guard {guard}")
    # periodic with period `big` from s1 + s2 + big on; confirm it twice
    start = c1.stem.length + c2.stem.length + big
    window = start + 2 * big + 2
    if window > guard:
        raise GuardExceeded(f"concatenation window {window} exceeds guard {guard}")
    x = membership_bits(c1, window).to_array()
    y = membership_bits(c2, window).to_array()
    return eventual_form(_bool_convolve(x, y, window), start, big)


# -- Kleene star -------------------------------------------------------------


def _least_by_residue(c: ChrobakNF, a: int) -> list:
    """Least positive accepted length in every residue class mod a (None if absent)."""
    best = [None] * a
    s = c.stem.length

    def offer(v):
        r = v % a
        if best[r] is None or v < best[r]:
            best[r] = v

    for i in c.stem.positions():
        if i > 0:
            offer(i)
    for cyc in c.cycles:
        p = cyc.length
        pos = np.array(cyc.positions(), dtype=np.int64)
        if pos.size == 0:
            continue
        for t in range(a // math.gcd(p, a)):
            vals = s + pos + t * p
            for v in vals[vals > 0].tolist():
                offer(v)
    return best


def _closure(gens: list, a: int) -> list:
    """Least element of the generated monoid in each residue class mod a.

    `a` must itself be a generator, so each class is closed upwards by a.
    """
    dist = [None] * a
    dist[0] = 0
    heap = [(0, 0)]
    steps = [v for v in gens if v is not None]
    while heap:
        d, r = heapq.heappop(heap)
        if d > dist[r]:
            continue
        for v in steps:
            d2, r2 = d + v, (r + v) % a
            if dist[r2] is None or d2 < dist[r2]:
                dist[r2] = d2
                heapq.heappush(heap, (d2, r2))
    return dist


def _star_form(dist: list, a: int) -> ChrobakNF:
    top = max(d for d in dist if d is not None)
    arr = np.zeros(top + 2 * a + 1, dtype=bool)
    for d in dist:
        if d is not None:
            arr[d::a] = True
    # beyond the largest class minimum, membership depends only on x mod a
    return eventual_form(arr, top, a)


def star_chrobak(c: ChrobakNF) -> ChrobakNF:
    """Kleene star, returned as a minimal stem plus one cycle."""
    probe = membership_bits(c, c.stem.length + max(c.cycle_lengths, default=0) + 1)
    positive = [i for i in probe.positions() if i > 0]
    if not positive:
        return ChrobakNF.of("1")
    a = positive[0]
    return _star_form(_closure(_least_by_residue(c, a), a), a)


def star(a: UnaryNfa) -> ChrobakNF:
    """Kleene star of an NFA, read off membership bits up to a size bound.

    L* has a DFA with at most D = (n-1)^2 + 1 states, so its least element
    in each class mod a_min lies below D + a_min, and only words of L up to
    that length can contribute.
    """
    n = a.num_states
    bound = (n - 1) ** 2 + 1
    limit = 2 * bound + 6 * n + 2
    bits = membership_bits(a, limit).to_array()
    positive = np.flatnonzero(bits[1:]) + 1
    if positive.size == 0:
        return ChrobakNF.of("1")
    step = int(positive[0])
    gens = [None] * step
    for v in positive[::-1].tolist():
        gens[v % step] = v
    dist = _closure(gens, step)
    if any(d is not None and d >= bound + step for d in dist):
        raise AssertionError("star closure exceeded the (n-1)^2+1 state bound")
    return _star_form(dist, step)


# -- structured intersection -------------------------------------------------


def _residue_owner(c: ChrobakNF, modulus: int, name: str) -> dict:
    owner = {}
    for idx, cyc in enumerate(c.cycles):
        pos = cyc.positions()
        if not pos:
            continue
        if cyc.length % modulus:
            raise StructureViolation(f"{name}: cycle length {cyc.length} not a multiple of {modulus}")
        for res in {p % modulus for p in pos}:
            if res in owner:
                raise StructureViolation(
                    f"{name}: cycles {owner[res]} and {idx} both accept residue {res} mod {modulus}"
                )
            owner[res] = idx
    return owner


def structured_intersection(c1: ChrobakNF, c2: ChrobakNF, modulus: int) -> ChrobakNF:
    """Intersection with one cycle per residue class mod `modulus`."""
    c1, c2 = equalize_stems(c1, c2)
    own1 = _residue_owner(c1, modulus, "first input")
    own2 = _residue_owner(c2, modulus, "second input")
    cycles = []
    for res in range(modulus):
        if res not in own1 or res not in own2:
            continue
        x, y = c1.cycles[own1[res]], c2.cycles[own2[res]]
        n = math.lcm(x.length, y.length)
        both = (x.tile(n) & y.tile(n)).to_array()
        keep = np.zeros(n, dtype=bool)
        keep[res::modulus] = both[res::modulus]
        if keep.any():
            cycles.append(Bits.from_array(keep))
    return ChrobakNF(c1.stem & c2.stem, tuple(cycles))
