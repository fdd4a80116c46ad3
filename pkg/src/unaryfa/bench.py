"""Seeded random families and the benchmark suites behind `unaryfa bench`."""

from __future__ import annotations

import csv
import io
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core import Bits, ChrobakNF, UnaryNfa, ambiguity_chrobak, chrobak_to_nfa
from .hardness import CnfInstance, gen_universality_nfa
from .oracle import Relation, brute_sat, oracle_relation

CSV_HEADER = ("case", "algorithm", "n_in", "n_out", "time_ms", "verdict")


# -- random families ---------------------------------------------------------


def random_ufa(rng: random.Random, max_states: int, max_cycles: int = 4, max_stem: int = 3) -> ChrobakNF:
    """Random unambiguous Chrobak automaton with at most max_states states.

    Cycle lengths are distinct multiples of a shared factor; accepting
    positions are added one at a time, skipping any that would share a
    residue (modulo the gcd of lengths) with an already accepting position
    of another cycle.
    """
    while True:
        stem_len = rng.randint(0, min(max_stem, max_states - 1))
        budget = max_states - stem_len
        factor = rng.choice([1, 1, 2, 2, 3, 4, 6])
        options = list(range(factor, budget + 1, factor))
        rng.shuffle(options)
        target = rng.randint(1, max_cycles)
        lengths = []
        for L in options:
            if len(lengths) >= target:
                break
            if sum(lengths) + L <= budget:
                lengths.append(L)
        if not lengths:
            lengths = [rng.randint(1, budget)]
        accepted = [[] for _ in lengths]
        for i, L in enumerate(lengths):
            for pos in rng.sample(range(L), L):
                if rng.random() < 0.5:
                    continue
                clash = any(
                    (pos - b) % math.gcd(L, lengths[j]) == 0
                    for j in range(len(lengths))
                    if j != i
                    for b in accepted[j]
                )
                if not clash:
                    accepted[i].append(pos)
        stem = Bits.from_iter(rng.random() < 0.5 for _ in range(stem_len))
        cycles = tuple(Bits.from_positions(a, L) for a, L in zip(accepted, lengths))
        c = ChrobakNF(stem, cycles)
        if ambiguity_chrobak(c).unambiguous:
            return c


def random_universal_ufa(rng: random.Random, max_modulus: int = 24, max_stem: int = 3) -> ChrobakNF:
    """Universal UFA from a random refinement of residue classes."""
    classes = [(1, 0)]
    for _ in range(rng.randint(0, 5)):
        idx = rng.randrange(len(classes))
        d, k = classes[idx]
        f = rng.choice([2, 3])
        if d * f > max_modulus:
            continue
        classes[idx : idx + 1] = [(d * f, k + i * d) for i in range(f)]
    by_mod = {}
    for d, k in classes:
        by_mod.setdefault(d, []).append(k)
    cycles = tuple(Bits.from_positions(ks, d) for d, ks in sorted(by_mod.items()))
    return ChrobakNF(Bits.ones(rng.randint(0, max_stem)), cycles)


def random_chrobak(rng: random.Random, max_states: int, max_cycles: int = 3, max_stem: int = 4) -> ChrobakNF:
    """Random (usually ambiguous) Chrobak automaton."""
    stem_len = rng.randint(0, min(max_stem, max_states - 1))
    budget = max_states - stem_len
    cycles = []
    for _ in range(rng.randint(0, max_cycles)):
        if budget < 1:
            break
        L = rng.randint(1, min(budget, max(1, budget // 2 + 1)))
        budget -= L
        cycles.append(Bits.from_iter(rng.random() < 0.4 for _ in range(L)))
    stem = Bits.from_iter(rng.random() < 0.5 for _ in range(stem_len))
    return ChrobakNF(stem, tuple(cycles))


def random_nfa(rng: random.Random, n: int, density: float = 0.2) -> UnaryNfa:
    edges = [(u, v) for u in range(n) for v in range(n) if rng.random() < density]
    starts = [q for q in range(n) if rng.random() < 0.2] or [0]
    accepts = [q for q in range(n) if rng.random() < 0.3]
    return UnaryNfa.from_edges(n, starts, accepts, edges)


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, width: int = 3) -> CnfInstance:
    """Random CNF in which every variable occurs at most three times."""
    room = {v: 3 for v in range(1, num_vars + 1)}
    clauses = []
    for _ in range(num_clauses):
        free = [v for v, left in room.items() if left > 0]
        if not free:
            break
        k = rng.randint(1, min(width, len(free)))
        chosen = rng.sample(free, k)
        for v in chosen:
            room[v] -= 1
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in chosen))
    return CnfInstance(num_vars, tuple(clauses))


# -- suites ------------------------------------------------------------------


@dataclass(frozen=True)
class BenchCase:
    name: str
    family: str
    seed: int
    algorithm: str
    params: dict = field(default_factory=dict)
    repetitions: int = 1


def _complement_cases(seed):
    return [
        BenchCase(f"complement-n{n:02d}-s{i}", "random-ufa", seed + 1000 * n + i, "complement_ufa", {"n": n})
        for n in range(8, 65, 8)
        for i in range(3)
    ]


def _star_cases(seed):
    return [
        BenchCase(f"star-n{n:02d}-s{i}", "random-nfa", seed + 1000 * n + i, "star", {"n": n})
        for n in range(2, 51, 4)
        for i in range(2)
    ]


def _product_cases(seed):
    return [
        BenchCase(f"product-n{n:02d}-s{i}", "random-ufa-pair", seed + 1000 * n + i, "intersect", {"n": n})
        for n in range(4, 33, 4)
        for i in range(2)
    ]


def _thm2_cases(seed):
    return [
        BenchCase(f"thm2-s{i:03d}", "random-chrobak-pair", seed + i, "nfa_subset", {"n": 24})
        for i in range(40)
    ]


def _hardness_cases(seed):
    return [
        BenchCase(f"prop1-v{v}-s{i}", "random-3occur-cnf", seed + 100 * v + i, "gen_universality_nfa", {"vars": v})
        for v in range(1, 5)
        for i in range(3)
    ]


SUITES = {
    "complement-growth": _complement_cases,
    "star-bound": _star_cases,
    "product-bound": _product_cases,
    "thm2-vs-oracle": _thm2_cases,
    "hardness-roundtrip": _hardness_cases,
}


def build_suite(name: str, seed: int = 0) -> list:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    return SUITES[name](seed)


def _measure(fn):
    start = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - start) * 1000


def run_case(case: BenchCase) -> dict:
    from .decision import nfa_subset
    from .regops import complement_ufa, intersect, star

    rng = random.Random(case.seed)
    row = {"case": case.name, "algorithm": case.algorithm}
    if case.algorithm == "complement_ufa":
        c = random_ufa(rng, case.params["n"])
        out, ms = _measure(lambda: complement_ufa(c))
        n = c.num_states
        ok = out.num_states <= n ** (math.log2(max(n, 2)) + 10) and ambiguity_chrobak(out).unambiguous
        row.update(n_in=n, n_out=out.num_states, verdict="ok" if ok else "bound-violated")
    elif case.algorithm == "star":
        a = random_nfa(rng, case.params["n"], density=2.0 / case.params["n"])
        out, ms = _measure(lambda: star(a))
        n = a.num_states
        ok = out.num_states <= (n - 1) ** 2 + 1
        row.update(n_in=n, n_out=out.num_states, verdict="ok" if ok else "bound-violated")
    elif case.algorithm == "intersect":
        a = chrobak_to_nfa(random_ufa(rng, case.params["n"]))
        b = chrobak_to_nfa(random_ufa(rng, case.params["n"]))
        out, ms = _measure(lambda: intersect(a, b))
        n = max(a.num_states, b.num_states)
        ok = out.num_states <= a.num_states * b.num_states
        row.update(n_in=n, n_out=out.num_states, verdict="ok" if ok else "bound-violated")
    elif case.algorithm == "nfa_subset":
        a = random_chrobak(rng, case.params["n"])
        b = random_chrobak(rng, case.params["n"])
        got, ms = _measure(lambda: nfa_subset(a, b))
        want = oracle_relation(Relation.SUBSET, a, b)
        row.update(
            n_in=a.num_states + b.num_states,
            n_out=0,
            verdict="agree" if got.holds == want.holds else "DISAGREE",
        )
    elif case.algorithm == "gen_universality_nfa":
        from .decision import nfa_universal

        v = case.params["vars"]
        cnf = random_cnf(rng, v, rng.randint(1, 4))
        (aut, _), ms = _measure(lambda: gen_universality_nfa(cnf))
        universal = nfa_universal(aut).holds
        unsat = brute_sat(cnf) is None
        row.update(n_in=v, n_out=aut.num_states, verdict="agree" if universal == unsat else "DISAGREE")
    else:
        raise KeyError(f"unknown algorithm {case.algorithm!r}")
    row["time_ms"] = ms
    return row


def run_suite(cases, jobs: int = 1) -> list:
    """Rows for every case, ordered by case name."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_case, cases))
    else:
        rows = [run_case(c) for c in cases]
    return sorted(rows, key=lambda r: r["case"])


def rows_to_csv(rows, timing: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        ms = f"{r['time_ms']:.3f}" if timing else "0"
        writer.writerow([r["case"], r["algorithm"], r["n_in"], r["n_out"], ms, r["verdict"]])
    return buf.getvalue()
