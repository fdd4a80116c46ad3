"""Unary automata data model, membership and ambiguity analysis.

Bit sequences are packed into Python integers, little-endian by word
length: bit ``i`` of ``Bits.value`` is the acceptance of the word of
length ``i`` (or of cycle position ``i``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .numtheory import ResidueClass, crt_solve


@dataclass(frozen=True)
class Bits:
    value: int
    length: int

    def __post_init__(self):
        if self.length < 0 or self.value < 0 or self.value >> self.length:
            raise ValueError(f"value does not fit in {self.length} bits")

    @classmethod
    def from_str(cls, text: str) -> "Bits":
        if text in ("", "-"):
            return cls(0, 0)
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text[::-1], 2), len(text))

    @classmethod
    def from_iter(cls, flags: Iterable) -> "Bits":
        value = 0
        n = 0
        for i, f in enumerate(flags):
            if f:
                value |= 1 << i
            n = i + 1
        return cls(value, n)

    @classmethod
    def from_positions(cls, positions: Iterable[int], length: int) -> "Bits":
        value = 0
        for p in positions:
            value |= 1 << p
        return cls(value, length)

    @classmethod
    def from_array(cls, arr) -> "Bits":
        arr = np.asarray(arr, dtype=bool)
        if arr.size == 0:
            return cls(0, 0)
        packed = np.packbits(arr, bitorder="little")
        return cls(int.from_bytes(packed.tobytes(), "little"), int(arr.size))

    @classmethod
    def zeros(cls, n: int) -> "Bits":
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> "Bits":
        return cls((1 << n) - 1, n)

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, stop, step = i.indices(self.length)
            if step != 1:
                return Bits.from_array(self.to_array()[i])
            n = max(0, stop - start)
            return Bits((self.value >> start) & ((1 << n) - 1), n)
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __iter__(self):
        return (c == "1" for c in str(self))

    def __str__(self):
        if self.length == 0:
            return ""
        return format(self.value, f"0{self.length}b")[::-1]

    def __repr__(self):
        return f"Bits('{self}')" if self.length <= 64 else f"Bits(<{self.length} bits>)"

    def __or__(self, other: "Bits") -> "Bits":
        self._same_length(other)
        return Bits(self.value | other.value, self.length)

    def __and__(self, other: "Bits") -> "Bits":
        self._same_length(other)
        return Bits(self.value & other.value, self.length)

    def __xor__(self, other: "Bits") -> "Bits":
        self._same_length(other)
        return Bits(self.value ^ other.value, self.length)

    def __invert__(self) -> "Bits":
        return Bits(self.value ^ ((1 << self.length) - 1), self.length)

    def _same_length(self, other):
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def count(self) -> int:
        return self.value.bit_count()

    def any(self) -> bool:
        return self.value != 0

    def all(self) -> bool:
        return self.value == (1 << self.length) - 1

    def lowest(self) -> Optional[int]:
        """Index of the lowest set bit, or None."""
        if not self.value:
            return None
        return (self.value & -self.value).bit_length() - 1

    def append(self, bit) -> "Bits":
        return Bits(self.value | ((1 if bit else 0) << self.length), self.length + 1)

    def concat(self, other: "Bits") -> "Bits":
        return Bits(self.value | (other.value << self.length), self.length + other.length)

    def rotate(self, k: int) -> "Bits":
        """Left rotation: new bit j is old bit (j + k) mod length."""
        n = self.length
        if n == 0:
            return self
        k %= n
        if k == 0:
            return self
        low = self.value & ((1 << k) - 1)
        return Bits((self.value >> k) | (low << (n - k)), n)

    def tile(self, n: int) -> "Bits":
        """Repeat the sequence periodically out to length n."""
        if n == 0:
            return Bits(0, 0)
        if self.length == 0:
            raise ValueError("cannot tile an empty sequence")
        value, have = self.value, self.length
        while have < n:
            value |= value << have
            have *= 2
        return Bits(value & ((1 << n) - 1), n)

    def to_array(self) -> np.ndarray:
        if self.length == 0:
            return np.zeros(0, dtype=bool)
        nbytes = (self.length + 7) // 8
        raw = np.frombuffer(self.value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length].astype(bool)

    def positions(self) -> list[int]:
        if self.length <= 256:
            return [i for i, c in enumerate(str(self)) if c == "1"]
        return np.flatnonzero(self.to_array()).tolist()


def _as_bits(x) -> Bits:
    return x if isinstance(x, Bits) else Bits.from_str(x)


@dataclass(frozen=True)
class ChrobakNF:
    """A stem followed by parallel cycles entered from the last stem state.

    Word length ``l < len(stem)`` is decided by ``stem[l]``; longer words
    are accepted iff some cycle has bit ``(l - len(stem)) mod len(cycle)``.
    """

    stem: Bits = Bits(0, 0)
    cycles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "stem", _as_bits(self.stem))
        cycles = tuple(_as_bits(c) for c in self.cycles)
        for c in cycles:
            if c.length < 1:
                raise ValueError("every cycle needs length >= 1")
        object.__setattr__(self, "cycles", cycles)

    @classmethod
    def of(cls, stem: str = "", *cycles: str) -> "ChrobakNF":
        return cls(Bits.from_str(stem), tuple(Bits.from_str(c) for c in cycles))

    @classmethod
    def empty(cls) -> "ChrobakNF":
        return cls()

    @classmethod
    def all_words(cls) -> "ChrobakNF":
        return cls.of("", "1")

    @property
    def stem_length(self) -> int:
        return self.stem.length

    @property
    def num_states(self) -> int:
        return self.stem.length + sum(c.length for c in self.cycles)

    @property
    def cycle_lengths(self) -> list[int]:
        return [c.length for c in self.cycles]

    def period(self) -> int:
        return math.lcm(*self.cycle_lengths) if self.cycles else 1

    def accepts(self, length: int) -> bool:
        s = self.stem.length
        if length < s:
            return bool(self.stem[length])
        off = length - s
        return any(c[off % c.length] for c in self.cycles)

    def is_normalized(self) -> bool:
        lengths = self.cycle_lengths
        return len(set(lengths)) == len(lengths) and all(c.any() for c in self.cycles)

    def __str__(self):
        parts = [f"stem {self.stem or '-'}"] + [f"cycle {c}" for c in self.cycles]
        return "; ".join(parts)


@dataclass(frozen=True)
class UnaryNfa:
    """Unary NFA as a digraph: the single letter moves along any edge."""

    num_states: int
    starts: frozenset
    accepts: frozenset
    succ: tuple

    def __post_init__(self):
        n = self.num_states
        object.__setattr__(self, "starts", frozenset(self.starts))
        object.__setattr__(self, "accepts", frozenset(self.accepts))
        succ = tuple(frozenset(s) for s in self.succ)
        if len(succ) != n:
            raise ValueError(f"succ must list {n} successor sets, got {len(succ)}")
        object.__setattr__(self, "succ", succ)
        for q in self.starts | self.accepts:
            if not 0 <= q < n:
                raise ValueError(f"state {q} out of range")
        for targets in succ:
            for q in targets:
                if not 0 <= q < n:
                    raise ValueError(f"edge target {q} out of range")

    @classmethod
    def from_edges(cls, num_states, starts, accepts, edges) -> "UnaryNfa":
        succ = [set() for _ in range(num_states)]
        for u, v in edges:
            succ[u].add(v)
        return cls(num_states, frozenset(starts), frozenset(accepts), tuple(succ))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_states) for v in sorted(self.succ[u])]

    def accepts_empty(self) -> bool:
        return bool(self.starts & self.accepts)

    def step(self, current: frozenset) -> frozenset:
        if not current:
            return current
        return frozenset().union(*(self.succ[q] for q in current))

    def predecessors(self) -> list[set]:
        pred = [set() for _ in range(self.num_states)]
        for u, targets in enumerate(self.succ):
            for v in targets:
                pred[v].add(u)
        return pred


@dataclass(frozen=True)
class WitnessLength:
    value: int
    derivation: Optional[tuple] = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("witness length must be a natural number")
        if self.derivation is not None:
            object.__setattr__(self, "derivation", tuple(self.derivation))
            for cls in self.derivation:
                if not cls.contains(self.value):
                    raise ValueError(f"{self.value} violates {cls}")

    def __int__(self):
        return self.value


class Verdict(enum.Enum):
    UNAMBIGUOUS = "Unambiguous"
    AMBIGUOUS = "Ambiguous"
    UNKNOWN_BEYOND_BOUND = "UnknownBeyondBound"


@dataclass(frozen=True)
class AmbiguityReport:
    verdict: Verdict
    witness: Optional[WitnessLength] = None
    bound_used: Optional[int] = None

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict is Verdict.AMBIGUOUS):
            raise ValueError("witness must be present exactly for Ambiguous")

    @property
    def unambiguous(self) -> bool:
        return self.verdict is Verdict.UNAMBIGUOUS


Automaton = Union[UnaryNfa, ChrobakNF]


def _nfa_bits(a: UnaryNfa, upto: int) -> Bits:
    current = a.starts
    seen: dict[frozenset, int] = {}
    flags = []
    for length in range(upto):
        if current in seen:
            # the subset trajectory is deterministic, so it repeats from here on
            start = seen[current]
            head = Bits.from_iter(flags)
            cyc = head[start:]
            return head.concat(cyc.tile(upto - length))
        seen[current] = length
        flags.append(bool(current & a.accepts))
        current = a.step(current)
    return Bits.from_iter(flags) if upto else Bits(0, 0)


def _chrobak_bits(c: ChrobakNF, upto: int) -> Bits:
    s = c.stem.length
    if upto <= s:
        return c.stem[:upto]
    tail = upto - s
    value = 0
    for cyc in c.cycles:
        value |= cyc.tile(tail).value
    return c.stem.concat(Bits(value, tail))


def membership_bits(a: Automaton, upto: int) -> Bits:
    """Acceptance of word lengths 0 .. upto-1."""
    if upto < 0:
        raise ValueError("upto must be >= 0")
    if isinstance(a, ChrobakNF):
        return _chrobak_bits(a, upto)
    return _nfa_bits(a, upto)


def chrobak_to_nfa(c: ChrobakNF) -> UnaryNfa:
    """Materialise the stem-and-cycles graph, stem states first."""
    s = c.stem.length
    edges = [(i, i + 1) for i in range(s - 1)]
    accepts = [i for i in range(s) if c.stem[i]]
    entries = []
    offset = s
    for cyc in c.cycles:
        p = cyc.length
        entries.append(offset)
        edges += [(offset + j, offset + (j + 1) % p) for j in range(p)]
        accepts += [offset + j for j in cyc.positions()]
        offset += p
    if s:
        starts = [0]
        edges += [(s - 1, e) for e in entries]
    else:
        starts = entries
    return UnaryNfa.from_edges(offset, starts, accepts, edges)


_TILE_LIMIT = 1 << 24


def _least_common(x: Bits, y: Bits, below: Optional[int]) -> Optional[int]:
    """Least offset accepted by both cycles (None if none below `below`)."""
    window = math.lcm(x.length, y.length)
    if below is not None:
        window = min(window, below)
    if window <= _TILE_LIMIT:
        return (x.tile(window) & y.tile(window)).lowest()
    p, q = x.length, y.length
    g = math.gcd(p, q)
    by_class: dict[int, list[int]] = {}
    for b in y.positions():
        by_class.setdefault(b % g, []).append(b)
    best = None
    for a in x.positions():
        for b in by_class.get(a % g, ()):
            sol = crt_solve([ResidueClass(p, a), ResidueClass(q, b)]).residue
            if best is None or sol < best:
                best = sol
    if best is not None and below is not None and best >= below:
        return None
    return best


def ambiguity_chrobak(c: ChrobakNF) -> AmbiguityReport:
    """Exact test: a word past the stem has one run per cycle accepting it."""
    s = c.stem.length
    cycles = [cyc for cyc in c.cycles if cyc.any()]
    residues = {}
    best = None
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            x, y = cycles[i], cycles[j]
            g = math.gcd(x.length, y.length)
            for cyc in (x, y):
                if (id(cyc), g) not in residues:
                    residues[(id(cyc), g)] = {a % g for a in cyc.positions()}
            if not residues[(id(x), g)] & residues[(id(y), g)]:
                continue
            off = _least_common(x, y, None if best is None else best[0])
            if off is not None and (best is None or off < best[0]):
                best = (off, x.length, y.length)
    if best is None:
        return AmbiguityReport(Verdict.UNAMBIGUOUS)
    off, p, q = best
    value = s + off
    derivation = (ResidueClass(p, value % p), ResidueClass(q, value % q))
    return AmbiguityReport(Verdict.AMBIGUOUS, WitnessLength(value, derivation))


DEFAULT_MAX_STEPS = 10**6


def ambiguity_nfa(a: UnaryNfa, max_steps: int = DEFAULT_MAX_STEPS) -> AmbiguityReport:
    """Iterate per-state run counts capped at 2 until the vector repeats."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    n = a.num_states
    pred = [sorted(p) for p in a.predecessors()]
    accepting = sorted(a.accepts)
    counts = tuple(1 if q in a.starts else 0 for q in range(n))
    seen = set()
    for length in range(max_steps):
        if sum(counts[q] for q in accepting) >= 2:
            return AmbiguityReport(Verdict.AMBIGUOUS, WitnessLength(length), max_steps)
        if counts in seen:
            return AmbiguityReport(Verdict.UNAMBIGUOUS, None, max_steps)
        seen.add(counts)
        counts = tuple(min(2, sum(counts[u] for u in pred[v])) for v in range(n))
    return AmbiguityReport(Verdict.UNKNOWN_BEYOND_BOUND, None, max_steps)
