"""Generators that turn CNF formulas into unary automata.

Three families:

* gen_universality_nfa: an NFA that is universal iff the formula is unsatisfiable.
* gen_formula_instance: UFAs H1, H2 and a finite K with (H1 ∩ H2)·K universal
  iff the formula is unsatisfiable.
* gen_concat_blowup: a UFA U and a finite H whose concatenation has a
  complement consisting of a single residue class with a huge modulus.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import Bits, ChrobakNF
from .errors import FormatError, NotThreeOccur
from .numtheory import PrimeBasis, ResidueClass, crt_solve, first_primes_ge, floor_log2
from .regops import structured_intersection


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple = ()

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in clauses:
            if not c:
                raise ValueError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")
        object.__setattr__(self, "clauses", clauses)

    def occurrences(self) -> Counter:
        return Counter(abs(l) for c in self.clauses for l in c)

    def satisfied_by(self, values) -> bool:
        """values[v - 1] is the truth value of variable v."""
        return all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfInstance:
    num_vars = None
    clauses, current = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if current:
                    clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise FormatError("missing 'p cnf' line")
    try:
        return CnfInstance(num_vars, tuple(clauses))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def to_dimacs(c: CnfInstance) -> str:
    lines = [f"p cnf {c.num_vars} {len(c.clauses)}"]
    lines += [" ".join(str(l) for l in clause) + " 0" for clause in c.clauses]
    return "\n".join(lines) + "\n"


def is_three_occur(c: CnfInstance) -> bool:
    return all(n <= 3 for n in c.occurrences().values())


def to_three_occur(c: CnfInstance) -> CnfInstance:
    """Split every variable with d > 3 occurrences into y_1..y_d tied by a
    cycle of implications y_i -> y_(i+1 mod d). y_1 reuses the old index."""
    counts = c.occurrences()
    next_var = c.num_vars
    fresh = {}
    extra = []
    for v in sorted(counts):
        d = counts[v]
        if d <= 3:
            continue
        ys = [v] + list(range(next_var + 1, next_var + d))
        next_var += d - 1
        fresh[v] = ys
        extra += [(-ys[i], ys[(i + 1) % d]) for i in range(d)]
    seen = Counter()
    clauses = []
    for clause in c.clauses:
        out = []
        for lit in clause:
            v = abs(lit)
            if v in fresh:
                y = fresh[v][seen[v]]
                seen[v] += 1
                out.append(y if lit > 0 else -y)
            else:
                out.append(lit)
        clauses.append(tuple(out))
    return CnfInstance(next_var, tuple(clauses) + tuple(extra))


def _require_three_occur(c: CnfInstance) -> None:
    if not is_three_occur(c):
        worst = max(c.occurrences().items(), key=lambda kv: kv[1])
        raise NotThreeOccur(f"variable {worst[0]} occurs {worst[1]} times")


def _clause_false(clause, assign: dict) -> bool:
    return not any(assign[abs(l)] == (l > 0) for l in clause)


def _assignment(variables, k: int) -> dict:
    """k-th assignment: bit b of k is the value of the b-th variable."""
    return {v: bool((k >> b) & 1) for b, v in enumerate(variables)}


# -- universality NFA ---------------------------------------------------------


@dataclass(frozen=True)
class Prop1Meta:
    r: int
    s: int
    primes: PrimeBasis
    assignment_order: tuple  # per prime: sorted distinct variables of its clauses
    groups: tuple  # per prime: indices of its clauses
    pairs: tuple  # (i, j) prime index pairs that got a product cycle

    def residues_for(self, values) -> list:
        """Residue of a word length encoding the given assignment, per prime."""
        out = []
        for p, order in zip(self.primes.primes, self.assignment_order):
            k = sum(1 << b for b, v in enumerate(order) if values[v - 1])
            out.append(ResidueClass(p, k))
        return out


def gen_universality_nfa(c: CnfInstance) -> tuple:
    """Cycles of prime length checking clause groups plus product cycles
    checking consistency; universal iff c is unsatisfiable."""
    _require_three_occur(c)
    m = max(c.num_vars, 1)
    r = max(1, floor_log2(m) // 3)
    clauses = c.clauses
    s = math.ceil(len(clauses) / r)
    groups = [tuple(range(i * r, min((i + 1) * r, len(clauses)))) for i in range(s)]
    orders = [tuple(sorted({abs(l) for j in g for l in clauses[j]})) for g in groups]
    widest = max((len(o) for o in orders), default=0)
    # primes must also be large enough to index every assignment of a group
    basis = first_primes_ge(s, max(8 * m, 1 << widest))
    cycles = []
    for p, g, order in zip(basis.primes, groups, orders):
        bits = np.ones(p, dtype=bool)
        for k in range(1 << len(order)):
            assign = _assignment(order, k)
            if not any(_clause_false(clauses[j], assign) for j in g):
                bits[k] = False
        cycles.append(Bits.from_array(bits))
    pairs = []
    for i, j in combinations(range(s), 2):
        shared = set(orders[i]) & set(orders[j])
        if not shared:
            continue
        pairs.append((i, j))
        pi, pj = basis.primes[i], basis.primes[j]
        # value of every shared variable for each index of either cycle
        ki = np.arange(pi)
        kj = np.arange(pj)
        valid_i = ki < (1 << len(orders[i]))
        valid_j = kj < (1 << len(orders[j]))
        clash = np.zeros((pi, pj), dtype=bool)
        for v in shared:
            bi = (ki >> orders[i].index(v)) & 1
            bj = (kj >> orders[j].index(v)) & 1
            clash |= bi[:, None] != bj[None, :]
        clash &= valid_i[:, None] & valid_j[None, :]
        t = np.arange(pi * pj)
        cycles.append(Bits.from_array(clash[t % pi, t % pj]))
    meta = Prop1Meta(r, s, basis, tuple(orders), tuple(groups), tuple(pairs))
    return ChrobakNF(Bits(0, 0), tuple(cycles)), meta


# -- formula instance ----------------------------------------------------------


@dataclass(frozen=True)
class FormulaInstanceMeta:
    m: int
    m_prime: int
    groups: tuple  # per group: indices of original clauses
    renamed: dict  # (group, original variable) -> renamed variable
    clauses: tuple  # renamed clauses c_1..c_m'; equalities are ("eq", x, y)
    group_vars: tuple  # per group: sorted renamed variables
    owner: dict  # renamed variable -> group
    primes: tuple
    width: int  # 2(m'+1)

    def residues_for(self, values) -> list:
        """Classes of s with s*width + 2..2m'+1 all missing from H1 ∩ H2."""
        out = []
        for p, order in zip(self.primes, self.group_vars):
            k = sum(1 << b for b, v in enumerate(order) if values[v - 1])
            out.append(ResidueClass(p, k))
        return out


def _rename(c: CnfInstance):
    m = len(c.clauses)
    size = max(1, floor_log2(m)) if m else 1
    groups = [tuple(range(i, min(i + size, m))) for i in range(0, m, size)]
    renamed = {}
    owner = {}
    copies = {}
    clauses = []
    for gi, g in enumerate(groups):
        for j in g:
            out = []
            for lit in c.clauses[j]:
                key = (gi, abs(lit))
                if key not in renamed:
                    renamed[key] = len(renamed) + 1
                    owner[renamed[key]] = gi
                    copies.setdefault(abs(lit), []).append(renamed[key])
                y = renamed[key]
                out.append(y if lit > 0 else -y)
            clauses.append(tuple(out))
    for v in sorted(copies):
        chain = copies[v]
        clauses += [("eq", a, b) for a, b in zip(chain, chain[1:])]
    group_vars = [tuple(sorted(y for y, gi in owner.items() if gi == g)) for g in range(len(groups))]
    return groups, renamed, owner, clauses, group_vars


def gen_formula_instance(c: CnfInstance) -> tuple:
    """UFAs H1, H2 and finite K: (H1 ∩ H2)·K is universal iff c is unsatisfiable."""
    _require_three_occur(c)
    m = len(c.clauses)
    groups, renamed, owner, clauses, group_vars = _rename(c)
    m_prime = len(clauses)
    width = 2 * (m_prime + 1)
    widest = max((len(v) for v in group_vars), default=0)
    lower = max(8 * m + 1, 1 << widest)
    primes = first_primes_ge(len(groups), lower).primes
    h1, h2 = [], []
    for i, (p, order) in enumerate(zip(primes, group_vars)):
        a = np.zeros((p, width), dtype=bool)
        b = np.zeros((p, width), dtype=bool)
        if i == 0:
            a[:, 0:2] = True
            b[:, 0:2] = True
        pos = {v: bit for bit, v in enumerate(order)}
        for k in range(p):
            kk = k if k < (1 << len(order)) else 0
            val = {v: bool((kk >> pos[v]) & 1) for v in order}
            for j, clause in enumerate(clauses, start=1):
                if clause[0] == "eq":
                    _, x, y = clause
                    if x in val:
                        a[k, 2 * j] = val[x]
                        a[k, 2 * j + 1] = not val[x]
                    if y in val:
                        b[k, 2 * j] = not val[y]
                        b[k, 2 * j + 1] = val[y]
                elif owner[abs(clause[0])] == i and _clause_false(clause, val):
                    a[k, 2 * j : 2 * j + 2] = True
                    b[k, 2 * j : 2 * j + 2] = True
        h1.append(Bits.from_array(a.ravel()))
        h2.append(Bits.from_array(b.ravel()))
    k_lang = ChrobakNF(Bits.ones(2 * m_prime), ())
    meta = FormulaInstanceMeta(
        m, m_prime, tuple(groups), renamed, tuple(clauses), tuple(group_vars), owner, primes, width
    )
    return ChrobakNF(Bits(0, 0), tuple(h1)), ChrobakNF(Bits(0, 0), tuple(h2)), k_lang, meta


def gen_intersection_ufa(h1: ChrobakNF, h2: ChrobakNF, meta: FormulaInstanceMeta) -> ChrobakNF:
    return structured_intersection(h1, h2, meta.width)


# -- concatenation blow-up -----------------------------------------------------


@dataclass(frozen=True)
class BlowupInstanceMeta:
    m: int
    k: int
    primes: tuple
    expected: ResidueClass
    per_prime: tuple = field(default=())  # the class modulo (k+3)*p for each prime


def gen_concat_blowup(m: int) -> tuple:
    """UFA U and finite H with complement of L(U)·L(H) one residue class."""
    if m < 4:
        raise ValueError("m must be >= 4")
    k = max(1, math.floor(m / math.log2(m)))
    primes = first_primes_ge(k, m).primes
    w = k + 3
    cycles = []
    for ell, p in enumerate(primes):
        cycles.append(Bits.from_positions([ell + 2 + h * w for h in range(p - 1)], p * w))
    cycles.append(Bits.from_positions([0, 1, k + 2], w))
    u = ChrobakNF(Bits(0, 0), tuple(cycles))
    h = ChrobakNF(Bits.ones(k), ())
    per_prime = tuple(ResidueClass(w * p, k + 1 + w * (p - 1)) for p in primes)
    expected = crt_solve(list(per_prime))
    return u, h, BlowupInstanceMeta(m, k, primes, expected, per_prime)
