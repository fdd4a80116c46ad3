"""Inclusion, equality and universality tests for unary automata."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .chrobak import equalize_stems, nfa_to_chrobak, normalize
from .core import Bits, ChrobakNF, WitnessLength, membership_bits
from .errors import GuardExceeded
from .numtheory import ResidueClass, crt_solve, factorize, first_primes_ge, primes_upto
from .regops import complement_ufa, require_unambiguous

BASIS_GUARD = 2 * 10**8
WITNESS_SCAN = 10**7


def _as_chrobak(a) -> ChrobakNF:
    return a if isinstance(a, ChrobakNF) else nfa_to_chrobak(a)


@dataclass(frozen=True)
class RelationVerdict:
    holds: bool
    witness: Optional[WitnessLength] = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("witness must be present exactly when the relation fails")


# -- comparison of arbitrary NFAs --------------------------------------------


@dataclass
class ComparisonBasis:
    """Prime split and the merged cycles of length r*q^2 for both inputs.

    Every input cycle length divides r*q^2 for some q in Q or q = 1. With
    compact=True, r is the lcm of the P-parts of the actual cycle lengths,
    only the q that divide some cycle length are kept, and q^2 shrinks to
    the largest power of q that divides a cycle length.
    """

    n: int
    threshold: int
    P: tuple
    Q: tuple
    r: int
    moduli: dict  # q -> cycle length r*q^e (e = 2, or the largest exponent seen when compact)
    qcycles_first: dict = field(repr=False)
    qcycles_second: dict = field(repr=False)


def comparison_threshold(n: int) -> int:
    if n < 2:
        return 2
    return max(2, math.ceil((n * math.log2(n)) ** (1 / 3)))


def _tile_or(cycles, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=bool)
    for cyc in cycles:
        # broadcast the pattern over rows instead of materialising a tiled copy
        out.reshape(-1, cyc.length)[:] |= cyc.to_array()
    return out


def build_basis(c1: ChrobakNF, c2: ChrobakNF, compact: bool = True, guard: int = BASIS_GUARD) -> ComparisonBasis:
    lengths = sorted(set(c1.cycle_lengths + c2.cycle_lengths))
    n = max(c1.num_states, c2.num_states, max(lengths, default=1), 2)
    T = comparison_threshold(n)
    factored = {L: factorize(L) for L in lengths}
    primes = primes_upto(n)
    # a large prime is also small-side if it shares a cycle length with another large prime
    shared = set()
    for f in factored.values():
        big = [p for p in f if p >= T]
        if len(big) > 1:
            shared.update(big)
    P = [p for p in primes if p < T or p in shared]
    P_set = set(P)
    Q = tuple(p for p in primes if p not in P_set)
    if compact:
        r = 1
        for f in factored.values():
            r = math.lcm(r, math.prod(p**e for p, e in f.items() if p in P_set))
        q_exp = {}
        for f in factored.values():
            for p, e in f.items():
                if p not in P_set:
                    q_exp[p] = max(q_exp.get(p, 0), e)
    else:
        r = 1
        for p in P:
            pk = p
            while pk * p <= n:
                pk *= p
            r *= pk
        q_exp = {q: 2 for q in Q}
    moduli = {1: r, **{q: r * q**e for q, e in sorted(q_exp.items())}}
    total = sum(moduli.values())
    if total > guard:
        raise GuardExceeded(f"comparison basis needs {total} cycle states (guard {guard})")
    for L in lengths:
        if not any(m % L == 0 for m in moduli.values()):
            raise AssertionError(f"cycle length {L} divides no r*q^2 (r={r})")
    first, second = {}, {}
    for q, m in moduli.items():
        first[q] = _tile_or([c for c in c1.cycles if m % c.length == 0], m)
        second[q] = _tile_or([c for c in c2.cycles if m % c.length == 0], m)
    return ComparisonBasis(n, T, tuple(P), Q, r, moduli, first, second)


def nfa_subset(
    a, b, compact: bool = True, guard: int = BASIS_GUARD, minimize: bool = True
) -> RelationVerdict:
    """Is L(a) a subset of L(b)? Works for arbitrary (ambiguous) automata.

    The failing length is built by CRT from the basis; with minimize=True
    it is replaced by the least failing length when that scan is cheap.
    """
    c1, c2 = equalize_stems(_as_chrobak(a), _as_chrobak(b))
    S = c1.stem.length
    bad_stem = (c1.stem & ~c2.stem).lowest()
    if bad_stem is not None:
        return RelationVerdict(False, WitnessLength(bad_stem))
    if not c1.cycles:
        return RelationVerdict(True)
    basis = build_basis(c1, c2, compact, guard)
    r = basis.r
    holds = np.zeros(r, dtype=bool)
    violated = np.zeros(r, dtype=bool)
    for q, m in basis.moduli.items():
        sec = basis.qcycles_second[q]
        fst = basis.qcycles_first[q]
        holds |= sec.reshape(m // r, r).all(axis=0)
        violated |= (fst & ~sec).reshape(m // r, r).any(axis=0)
    failing = np.flatnonzero(~holds & violated)
    if failing.size == 0:
        return RelationVerdict(True)
    s = int(failing[0])
    classes = []
    chosen = None
    for q, m in basis.moduli.items():
        fst = basis.qcycles_first[q][s::r]
        sec = basis.qcycles_second[q][s::r]
        if chosen is None and (fst & ~sec).any():
            chosen = q
            t = int(np.flatnonzero(fst & ~sec)[0])
        else:
            t = int(np.flatnonzero(~sec)[0])
        classes.append(ResidueClass(m, s + t * r))
    sol = crt_solve(classes)
    value = S + sol.residue
    if minimize and value < WITNESS_SCAN:
        # the CRT class need not hold the least failing length; look below it
        value = (membership_bits(c1, value + 1) & ~membership_bits(c2, value + 1)).lowest()
    derivation = tuple(ResidueClass(c.modulus, value % c.modulus) for c in classes)
    return RelationVerdict(False, WitnessLength(value, derivation))


def nfa_equal(a, b, **kwargs) -> RelationVerdict:
    """Equality; on failure the witness is the smaller of the two one-sided ones."""
    failed = [v for v in (nfa_subset(a, b, **kwargs), nfa_subset(b, a, **kwargs)) if not v.holds]
    if not failed:
        return RelationVerdict(True)
    return min(failed, key=lambda v: v.witness.value)


def nfa_universal(a, **kwargs) -> RelationVerdict:
    return nfa_subset(ChrobakNF.all_words(), a, **kwargs)


# -- unambiguous automata ----------------------------------------------------


class Mode(enum.Enum):
    EXACT = "exact"
    MODULAR = "modular"


@dataclass
class DensityAccumulator:
    """Running value of s/p = sum of accepting-count / cycle-length.

    In modular mode s and p are tuples of residues, one per prime.
    """

    mode: Mode = Mode.EXACT
    primes: tuple = ()
    terms: list = field(default_factory=list)
    s: object = 0
    p: object = 1

    def __post_init__(self):
        if self.mode is Mode.MODULAR:
            self.s = tuple(0 for _ in self.primes)
            self.p = tuple(1 % q for q in self.primes)

    def add(self, i: int, j: int) -> None:
        self.terms.append((i, j))
        if self.mode is Mode.EXACT:
            self.s = self.s * j + i * self.p
            self.p = self.p * j
        else:
            self.s = tuple((s * j + i * p) % q for s, p, q in zip(self.s, self.p, self.primes))
            self.p = tuple((p * j) % q for p, q in zip(self.p, self.primes))

    def equals_one(self) -> bool:
        if self.mode is Mode.EXACT:
            return self.s == self.p
        return all(s == p for s, p in zip(self.s, self.p))


def modular_primes(n: int) -> tuple:
    count = math.ceil(5 * math.sqrt(max(n, 1))) + 2
    return first_primes_ge(count, 2).primes


def _density_is_one(cycles, mode: Mode, n: int) -> bool:
    primes = modular_primes(n) if mode is Mode.MODULAR else ()
    acc = DensityAccumulator(mode, primes)
    for cyc in cycles:
        acc.add(cyc.count(), cyc.length)
    return acc.equals_one()


def ufa_universal(c, mode: Union[Mode, str] = Mode.EXACT) -> bool:
    """Universality of a UFA: full stem and cycle densities summing to one."""
    c = _as_chrobak(c)
    mode = Mode(mode)
    require_unambiguous(c)
    if not c.stem.all():
        return False
    # merging equal lengths keeps the sum and keeps the modular product small
    c = normalize(c)
    return _density_is_one(c.cycles, mode, c.num_states)


def _strided(c2: ChrobakNF, start: int, w: int) -> ChrobakNF:
    """Automaton accepting i iff c2 accepts start + i*w (start >= stem of c2)."""
    off = start - c2.stem.length
    cycles = []
    for d in c2.cycles:
        g = math.gcd(w, d.length)
        size = d.length // g
        arr = d.to_array()
        idx = (off + np.arange(size, dtype=np.int64) * w) % d.length
        cycles.append(Bits.from_array(arr[idx]))
    return ChrobakNF(Bits(0, 0), tuple(cycles))


def _least_accepted(c: ChrobakNF) -> Optional[int]:
    s = c.stem.lowest()
    if s is not None:
        return s
    best = None
    for cyc in c.cycles:
        low = cyc.lowest()
        if low is not None and (best is None or low < best):
            best = low
    return None if best is None else c.stem.length + best


def ufa_inclusion(u1, u2, mode: Union[Mode, str] = Mode.EXACT) -> RelationVerdict:
    """Is L(u1) a subset of L(u2)? Only u2 has to be unambiguous."""
    u1, u2 = _as_chrobak(u1), _as_chrobak(u2)
    mode = Mode(mode)
    require_unambiguous(u2, "second input")
    bound = max(u1.stem.length, u2.stem.length)
    for length in range(bound):
        if u1.accepts(length) and not u2.accepts(length):
            return RelationVerdict(False, WitnessLength(length))
    s1, s2 = u1.stem.length, u2.stem.length
    cache = {}
    for cyc in u1.cycles:
        w = cyc.length
        for j in cyc.positions():
            v = ResidueClass(w, (s1 + j) % w).least_at_least(max(bound, s1))
            key = (w, tuple((v - s2) % math.gcd(w, d.length) for d in u2.cycles))
            if key not in cache:
                strided = normalize(_strided(u2, v, w))
                ok = _density_is_one(strided.cycles, mode, strided.num_states)
                cache[key] = (ok, strided)
            ok, strided = cache[key]
            if ok:
                continue
            i = _least_accepted(complement_ufa(strided))
            value = v + i * w
            return RelationVerdict(False, WitnessLength(value, (ResidueClass(w, v % w),)))
    return RelationVerdict(True)


# -- formulas ----------------------------------------------------------------


def eval_formula(expr, bindings: dict, allow_concat: bool = False):
    """Evaluate a formula string or parsed tree over named Chrobak automata."""
    from .formula import evaluate, parse

    tree = parse(expr) if isinstance(expr, str) else expr
    return evaluate(tree, bindings, allow_concat=allow_concat)
