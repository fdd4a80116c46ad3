import itertools
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from unaryfa import Bits, ChrobakNF, UnaryNfa, parse_uaf
from unaryfa.hardness import CnfInstance, is_three_occur
from unaryfa.oracle import oracle_bits

settings.register_profile("repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return parse_uaf((FIXTURES / name).read_text())


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


def window_for(*autos) -> int:
    """A window covering every stem plus two full joint periods."""
    stems, periods = [], []
    for a in autos:
        t = oracle_bits(a, cap=10**6)
        assert t.exact
        stems.append(t.threshold)
        periods.append(t.period)
    return max(stems) + 2 * math.lcm(*periods) + 2


def bits_of(a, n: int) -> np.ndarray:
    return oracle_bits(a, cap=10**6).extend(n)


def same_language(a, b) -> bool:
    n = window_for(a, b)
    return bool(np.array_equal(bits_of(a, n), bits_of(b, n)))


# -- hypothesis strategies ---------------------------------------------------

bitstrings = st.text(alphabet="01", min_size=1, max_size=7)


@st.composite
def chrobaks(draw, max_cycles=3, max_stem=4):
    stem = draw(st.text(alphabet="01", max_size=max_stem))
    cycles = draw(st.lists(bitstrings, max_size=max_cycles))
    return ChrobakNF.of(stem, *cycles)


@st.composite
def nfas(draw, max_states=6):
    n = draw(st.integers(1, max_states))
    states = st.integers(0, n - 1)
    starts = draw(st.sets(states, min_size=1, max_size=2))
    accepts = draw(st.sets(states, max_size=n))
    edges = draw(st.lists(st.tuples(states, states), max_size=2 * n))
    return UnaryNfa.from_edges(n, starts, accepts, edges)


# -- exhaustive families -----------------------------------------------------


def tiny_ufas(max_cycle_states=8, max_stem=0):
    """Every Chrobak automaton with distinct cycle lengths summing to at most
    max_cycle_states, every acceptance pattern, keeping the unambiguous ones."""
    from unaryfa import ambiguity_chrobak

    def length_sets(budget, smallest):
        yield ()
        for L in range(smallest, budget + 1):
            for rest in length_sets(budget - L, L + 1):
                yield (L,) + rest

    for lengths in length_sets(max_cycle_states, 1):
        if not lengths:
            continue
        patterns = [range(1 << L) for L in lengths]
        for stem_len in range(max_stem + 1):
            for stem_val in range(1 << stem_len):
                for pats in itertools.product(*patterns):
                    c = ChrobakNF(
                        Bits(stem_val, stem_len),
                        tuple(Bits(v, L) for v, L in zip(pats, lengths)),
                    )
                    if ambiguity_chrobak(c).unambiguous:
                        yield c


def tiny_chrobaks(max_states=4):
    """Every Chrobak automaton with at most max_states states."""

    def cycle_sets(budget):
        yield ()
        for L in range(1, budget + 1):
            for v in range(1 << L):
                for rest in cycle_sets(budget - L):
                    yield (Bits(v, L),) + rest

    seen = set()
    for stem_len in range(max_states + 1):
        for stem_val in range(1 << stem_len):
            for cycles in cycle_sets(max_states - stem_len):
                key = (stem_val, stem_len, tuple(sorted((c.value, c.length) for c in cycles)))
                if key in seen:
                    continue
                seen.add(key)
                yield ChrobakNF(Bits(stem_val, stem_len), cycles)


def tiny_three_occur_cnfs(max_vars=3, max_clauses=4):
    """Every 3-occur CNF with distinct clauses over exactly 1..max_vars variables."""
    for n in range(1, max_vars + 1):
        literals = []
        for signs in itertools.product((0, 1, -1), repeat=n):
            clause = tuple(s * (i + 1) for i, s in enumerate(signs) if s)
            if clause:
                literals.append(clause)
        for k in range(1, max_clauses + 1):
            for combo in itertools.combinations(literals, k):
                used = {abs(l) for cl in combo for l in cl}
                if len(used) != n:
                    continue
                cnf = CnfInstance(n, combo)
                if is_three_occur(cnf):
                    yield cnf


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
