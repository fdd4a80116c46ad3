"""Conversion into and manipulation of Chrobak normal form."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .core import Bits, ChrobakNF, UnaryNfa, membership_bits
from .errors import GuardExceeded
from .numtheory import lcm_guarded

DEFAULT_GUARD = 10**6


@dataclass(frozen=True)
class SccSummary:
    components: tuple  # tuple of frozensets of states
    period_of: dict  # component index -> digraph period, nontrivial components only


def _tarjan(n, succ, nodes):
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(sorted(succ[root] & nodes)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w] & nodes))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return comps


def _period(comp, succ):
    """gcd of level differences over intra-component edges (BFS levels)."""
    root = min(comp)
    level = {root: 0}
    queue = deque([root])
    g = 0
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in comp:
                continue
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = math.gcd(g, level[u] + 1 - level[v])
    return abs(g)


def useful_states(a: UnaryNfa) -> frozenset:
    """States reachable from a start and co-reachable to an accepting state."""
    forward = set(a.starts)
    queue = deque(a.starts)
    while queue:
        u = queue.popleft()
        for v in a.succ[u]:
            if v not in forward:
                forward.add(v)
                queue.append(v)
    pred = a.predecessors()
    backward = set(a.accepts)
    queue = deque(a.accepts)
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if u not in backward:
                backward.add(u)
                queue.append(u)
    return frozenset(forward & backward)


def scc_summary(a: UnaryNfa, restrict_to=None) -> SccSummary:
    nodes = frozenset(range(a.num_states)) if restrict_to is None else frozenset(restrict_to)
    comps = _tarjan(a.num_states, a.succ, nodes)
    periods = {}
    for i, comp in enumerate(comps):
        g = _period(comp, a.succ)
        if g:
            periods[i] = g
    return SccSummary(tuple(comps), periods)


def nfa_to_chrobak(a: UnaryNfa, guard: int = DEFAULT_GUARD) -> ChrobakNF:
    n = a.num_states
    stem_len = n * n
    summary = scc_summary(a, useful_states(a))
    periods = sorted(set(summary.period_of.values()))
    big = lcm_guarded(periods, guard)
    if big is None:
        raise GuardExceeded(f"lcm of SCC periods {periods} exceeds guard {guard}")
    bits = membership_bits(a, stem_len + 2 * big)
    stem = bits[:stem_len]
    window = bits[stem_len : stem_len + big]
    if window != bits[stem_len + big : stem_len + 2 * big]:
        raise AssertionError("membership is not periodic past n^2 with the SCC period lcm")
    if not periods:
        if window.any():
            raise AssertionError("acyclic useful part but words accepted past n^2")
        return ChrobakNF(stem, ())
    arr = window.to_array()
    cycles = []
    cover = Bits.zeros(big)
    for g in periods:
        cyc = Bits.from_array(arr.reshape(big // g, g).all(axis=0))
        if cyc.any():
            cycles.append(cyc)
            cover = cover | cyc.tile(big)
    if cover != window:
        cycles = [window] if window.any() else []
    return ChrobakNF(stem, tuple(cycles))


def _pad_once(c: ChrobakNF) -> ChrobakNF:
    entry = any(cyc[0] for cyc in c.cycles)
    return ChrobakNF(c.stem.append(entry), tuple(cyc.rotate(1) for cyc in c.cycles))


def pad_stem(c: ChrobakNF, length: int) -> ChrobakNF:
    """Lengthen the stem to `length` by moving every cycle entry forward."""
    if length < c.stem.length:
        raise ValueError("cannot shorten a stem")
    extra = length - c.stem.length
    if extra == 0:
        return c
    if not c.cycles:
        return ChrobakNF(c.stem.concat(Bits.zeros(extra)), ())
    if extra <= 4:
        for _ in range(extra):
            c = _pad_once(c)
        return c
    # same result as `extra` single steps, computed in one go
    value = 0
    for cyc in c.cycles:
        value |= cyc.tile(extra).value
    return ChrobakNF(c.stem.concat(Bits(value, extra)), tuple(cyc.rotate(extra) for cyc in c.cycles))


def equalize_stems(c1: ChrobakNF, c2: ChrobakNF) -> tuple[ChrobakNF, ChrobakNF]:
    target = max(c1.stem.length, c2.stem.length)
    return pad_stem(c1, target), pad_stem(c2, target)


def normalize(c: ChrobakNF) -> ChrobakNF:
    """Merge equal-length cycles by disjunction and drop all-zero cycles."""
    merged: dict[int, int] = {}
    order = []
    for cyc in c.cycles:
        if cyc.length not in merged:
            merged[cyc.length] = 0
            order.append(cyc.length)
        merged[cyc.length] |= cyc.value
    cycles = tuple(Bits(merged[p], p) for p in order if merged[p])
    return ChrobakNF(c.stem, cycles)


def determinize(c: ChrobakNF, guard: int = DEFAULT_GUARD) -> ChrobakNF:
    """One cycle of length lcm(cycle lengths) carrying the union of all cycles."""
    if len(c.cycles) <= 1:
        return c
    big = lcm_guarded(c.cycle_lengths, guard)
    if big is None:
        raise GuardExceeded(f"lcm of cycle lengths exceeds guard {guard}")
    value = 0
    for cyc in c.cycles:
        value |= cyc.tile(big).value
    return ChrobakNF(c.stem, (Bits(value, big),))
