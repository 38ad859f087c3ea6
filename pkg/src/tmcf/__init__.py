"""Generalized Thue-Morse sequences, their word combinatorics, and exact
continued-fraction evaluation."""

from .words import (
    AlphabetError,
    FiniteWord,
    LazyWord,
    ModAlphabet,
    Morphism,
    SymbolError,
    WordRangeError,
    digits,
    subword,
    value,
)
from .tm import (
    CongruenceReport,
    EquivalenceReport,
    TmSequence,
    check_congruences,
    check_lemma_recursion,
    digit_sum_stream,
    find_triple_repeat,
    tm_digit_sum,
    tm_digit_sum_sequence,
    tm_morphic,
    tm_morphism,
    tm_sequence,
    verify_equivalence,
)
from .analysis import (
    ComplexityProfile,
    PalindromeLadder,
    PeriodWitness,
    SuffixAutomaton,
    SurjectionCheck,
    complexity,
    complexity_naive,
    complexity_ratio_diagnostic,
    find_pattern,
    find_period,
    palindromic_prefixes,
    predicted_011_positions,
    verify_complexity_surjection,
)
from .cf import (
    AlphabetMap,
    AlphabetMapError,
    ApproximationReport,
    CertifiedDecimal,
    ConvergentPair,
    MoebiusMap,
    approximation_report,
    bracket,
    convergent_stream,
    convergents,
    coprime,
    evaluate,
    map_alphabet,
    tail_transform,
    verify_tail_intervals,
)

__version__ = "0.1.0"

__all__ = [
    "AlphabetError",
    "AlphabetMap",
    "AlphabetMapError",
    "ApproximationReport",
    "CertifiedDecimal",
    "ComplexityProfile",
    "CongruenceReport",
    "ConvergentPair",
    "EquivalenceReport",
    "FiniteWord",
    "LazyWord",
    "ModAlphabet",
    "MoebiusMap",
    "Morphism",
    "PalindromeLadder",
    "PeriodWitness",
    "SuffixAutomaton",
    "SurjectionCheck",
    "SymbolError",
    "TmSequence",
    "WordRangeError",
    "approximation_report",
    "bracket",
    "check_congruences",
    "check_lemma_recursion",
    "coprime",
    "complexity",
    "complexity_naive",
    "complexity_ratio_diagnostic",
    "convergent_stream",
    "convergents",
    "digit_sum_stream",
    "digits",
    "evaluate",
    "find_pattern",
    "find_period",
    "find_triple_repeat",
    "map_alphabet",
    "palindromic_prefixes",
    "predicted_011_positions",
    "subword",
    "tail_transform",
    "tm_digit_sum",
    "tm_digit_sum_sequence",
    "tm_morphic",
    "tm_morphism",
    "tm_sequence",
    "value",
    "verify_complexity_surjection",
    "verify_equivalence",
    "verify_tail_intervals",
]
