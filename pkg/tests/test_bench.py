import math
import random

import pytest

from unaryfa import ambiguity_chrobak, nfa_universal, ufa_universal
from unaryfa.bench import (
    CSV_HEADER,
    SUITES,
    build_suite,
    random_chrobak,
    random_cnf,
    random_nfa,
    random_ufa,
    random_universal_ufa,
    rows_to_csv,
    run_suite,
)
from unaryfa.hardness import is_three_occur


def test_random_families_respect_limits():
    rng = random.Random(3)
    for _ in range(100):
        c = random_ufa(rng, 20)
        assert c.num_states <= 20
        assert ambiguity_chrobak(c).unambiguous
        assert random_chrobak(rng, 12).num_states <= 12
        assert random_nfa(rng, 6).num_states == 6
        assert is_three_occur(random_cnf(rng, 5, 8))


def test_universal_family():
    rng = random.Random(4)
    for _ in range(30):
        c = random_universal_ufa(rng)
        assert ufa_universal(c)
        assert nfa_universal(c).holds


def test_families_are_seeded():
    assert random_ufa(random.Random(9), 30) == random_ufa(random.Random(9), 30)
    assert random_cnf(random.Random(9), 4, 4) == random_cnf(random.Random(9), 4, 4)


def test_unknown_suite():
    with pytest.raises(KeyError):
        build_suite("nope")


def test_suite_names():
    assert set(SUITES) == {"complement-growth", "star-bound", "product-bound", "thm2-vs-oracle", "hardness-roundtrip"}


def test_complement_growth_range():
    ns = {c.params["n"] for c in build_suite("complement-growth")}
    assert min(ns) == 8 and max(ns) == 64


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suite_verdicts(suite):
    rows = run_suite(build_suite(suite, seed=1))
    assert rows == sorted(rows, key=lambda r: r["case"])
    assert all(r["verdict"] in ("ok", "agree") for r in rows)
    for r in rows:
        if suite == "star-bound":
            assert r["n_out"] <= (r["n_in"] - 1) ** 2 + 1
        if suite == "product-bound":
            assert r["n_out"] <= r["n_in"] ** 2
        if suite == "complement-growth":
            n = r["n_in"]
            assert r["n_out"] <= n ** (math.log2(n) + 10)


def test_csv_is_reproducible():
    cases = build_suite("thm2-vs-oracle", seed=5)[:10]
    first = rows_to_csv(run_suite(cases), timing=False)
    second = rows_to_csv(run_suite(cases, jobs=2), timing=False)
    assert first == second
    assert first.splitlines()[0] == ",".join(CSV_HEADER)
