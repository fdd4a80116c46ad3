"""Unary finite automata: Chrobak normal form, UFA complementation,
comparison and universality tests, and SAT-based instance generators."""

from .chrobak import determinize, equalize_stems, nfa_to_chrobak, normalize, pad_stem
from .core import (
    AmbiguityReport,
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
from .decision import (
    ComparisonBasis,
    DensityAccumulator,
    Mode,
    RelationVerdict,
    build_basis,
    eval_formula,
    nfa_equal,
    nfa_subset,
    nfa_universal,
    ufa_inclusion,
    ufa_universal,
)
from .errors import *  # noqa: F401,F403
from .hardness import (
    CnfInstance,
    gen_concat_blowup,
    gen_formula_instance,
    gen_intersection_ufa,
    gen_universality_nfa,
    parse_dimacs,
    to_dimacs,
    to_three_occur,
)
from .numtheory import PrimeBasis, ResidueClass, crt_solve, first_primes_ge, lcm_guarded
from .oracle import Relation, brute_sat, minimal_period, oracle_bits, oracle_relation
from .regops import (
    complement_ufa,
    concat_nfa,
    concat_via_bits,
    disjoint_union,
    intersect,
    intersect_chrobak,
    star,
    star_chrobak,
    structured_intersection,
    symdiff_ufa,
    union_ufa,
)
from .uaf import parse_uaf, print_uaf

__version__ = "0.1.0"
