import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import chrobaks, load, nfas
from unaryfa import (
    Bits,
    ChrobakNF,
    UnaryNfa,
    Verdict,
    WitnessLength,
    ambiguity_chrobak,
    ambiguity_nfa,
    chrobak_to_nfa,
    membership_bits,
)
from unaryfa.numtheory import ResidueClass


def run_counts(a: UnaryNfa, upto: int):
    """Number of accepting runs per length, by dynamic programming."""
    counts = np.array([1 if q in a.starts else 0 for q in range(a.num_states)], dtype=object)
    out = []
    for _ in range(upto):
        out.append(sum(counts[q] for q in a.accepts))
        nxt = np.zeros(a.num_states, dtype=object)
        for u in range(a.num_states):
            for v in a.succ[u]:
                nxt[v] += counts[u]
        counts = nxt
    return out


# -- Bits ----------------------------------------------------------------------


@given(st.text(alphabet="01", max_size=80))
def test_bits_str_round_trip(text):
    b = Bits.from_str(text)
    assert str(b) == text
    assert Bits.from_array(b.to_array()) == b
    assert Bits.from_iter(b) == b
    assert b.positions() == [i for i, ch in enumerate(text) if ch == "1"]


@given(st.text(alphabet="01", min_size=1, max_size=30), st.integers(0, 100))
def test_bits_tile_and_rotate(text, n):
    b = Bits.from_str(text)
    assert str(b.tile(n)) == (text * (n // len(text) + 1))[:n]
    k = n % len(text)
    assert str(b.rotate(n)) == text[k:] + text[:k]


def test_bits_ops():
    a, b = Bits.from_str("1100"), Bits.from_str("1010")
    assert str(a & b) == "1000"
    assert str(a | b) == "1110"
    assert str(a ^ b) == "0110"
    assert str(~a) == "0011"
    assert (~a).lowest() == 2
    assert Bits.zeros(3).lowest() is None
    assert str(a[1:3]) == "10"
    with pytest.raises(ValueError):
        a & Bits.from_str("1")
    with pytest.raises(ValueError):
        Bits.from_str("012")
    with pytest.raises(ValueError):
        Bits(4, 2)


def test_chrobak_rejects_empty_cycle():
    with pytest.raises(ValueError):
        ChrobakNF(Bits(0, 0), (Bits(0, 0),))


def test_nfa_validation():
    with pytest.raises(ValueError):
        UnaryNfa.from_edges(2, [0], [2], [])
    with pytest.raises(ValueError):
        UnaryNfa.from_edges(2, [0], [1], [(0, 5)])


# -- membership ----------------------------------------------------------------


def test_membership_examples():
    assert str(membership_bits(ChrobakNF.of("", "1"), 3)) == "111"
    assert str(membership_bits(ChrobakNF.of("", "10"), 5)) == "10101"
    assert str(membership_bits(load("path2.uaf"), 4)) == "0010"
    assert membership_bits(load("evens.uaf"), 0).length == 0


@given(chrobaks(), st.integers(0, 60))
def test_membership_matches_accepts(c, n):
    bits = membership_bits(c, n)
    assert [bool(x) for x in bits] == [c.accepts(i) for i in range(n)]


@given(chrobaks())
def test_chrobak_to_nfa_preserves_language(c):
    a = chrobak_to_nfa(c)
    assert a.num_states == c.num_states
    assert membership_bits(a, 60) == membership_bits(c, 60)


@given(nfas(), st.integers(0, 50))
def test_nfa_membership_matches_run_counts(a, n):
    got = [bool(x) for x in membership_bits(a, n)]
    want = [k > 0 for k in run_counts(a, n)]
    assert got == want


# -- ambiguity -----------------------------------------------------------------


def test_ambiguity_chrobak_examples():
    assert ambiguity_chrobak(ChrobakNF.of("", "10", "01")).unambiguous
    r = ambiguity_chrobak(ChrobakNF.of("", "10", "0010"))
    assert r.verdict is Verdict.AMBIGUOUS and r.witness.value == 2
    assert ambiguity_chrobak(ChrobakNF.of("", "10", "0001")).unambiguous


def test_ambiguity_nfa_examples():
    assert ambiguity_nfa(load("evens_dfa.uaf")).unambiguous
    r = ambiguity_nfa(load("twin_loops.uaf"))
    assert r.verdict is Verdict.AMBIGUOUS and r.witness.value == 0
    r = ambiguity_nfa(load("stem_two_cycles.uaf"))
    assert r.verdict is Verdict.AMBIGUOUS and r.witness.value == 2


def test_ambiguity_nfa_bound():
    a = UnaryNfa.from_edges(3, [0], [0], [(0, 1), (1, 2), (2, 0)])
    r = ambiguity_nfa(a, max_steps=2)
    assert r.verdict is Verdict.UNKNOWN_BEYOND_BOUND
    with pytest.raises(ValueError):
        ambiguity_nfa(a, max_steps=0)


@given(chrobaks(max_cycles=4))
def test_ambiguity_chrobak_matches_run_counts(c):
    counts = run_counts(chrobak_to_nfa(c), c.stem_length + 2 * c.period() + 2)
    first = next((i for i, k in enumerate(counts) if k >= 2), None)
    r = ambiguity_chrobak(c)
    if first is None:
        assert r.unambiguous
    else:
        assert r.witness.value == first
        assert all(cls.contains(first) for cls in r.witness.derivation)


@given(nfas())
def test_ambiguity_nfa_matches_run_counts(a):
    n = a.num_states
    counts = run_counts(a, 2 ** n + 2)
    first = next((i for i, k in enumerate(counts) if k >= 2), None)
    r = ambiguity_nfa(a)
    if first is None:
        assert r.unambiguous
    else:
        assert r.witness.value == first


def test_large_cycles_use_residue_fallback():
    # lcm above the tiling limit forces the CRT route
    p, q = 4099, 4111
    x = Bits.from_positions([5], p)
    y = Bits.from_positions([7], q)
    r = ambiguity_chrobak(ChrobakNF(Bits(0, 0), (x, y)))
    want = [v for v in (5 + p * t for t in range(q)) if v % q == 7][0]
    assert r.witness.value == want


def test_witness_derivation_checked():
    with pytest.raises(ValueError):
        WitnessLength(4, (ResidueClass(3, 0),))
    with pytest.raises(ValueError):
        WitnessLength(-1)
    assert int(WitnessLength(6, (ResidueClass(3, 0),))) == 6
