"""State complexity workbench for prefix-free regular languages."""

from .automata import (
    AutomatonError,
    ContractViolation,
    Dfa,
    Nfa,
    RejectedInput,
    accepts,
    canonical,
    determinize,
    is_prefix_free,
    isomorphic,
    minimize,
    to_min_dfa,
)
from .complexity import (
    ComplexityResult,
    FoolingCertificate,
    ResourceLimitError,
    measure,
    nsc_exact_bruteforce,
    reachable_subsets,
    sc,
    verify_extended_fooling,
    verify_fooling_set,
)
from .constructions import (
    BoolOp,
    SplitConcatenationPlan,
    augment_reversal_witness,
    dfa_bool,
    dfa_concat_prefix_free,
    dfa_cyclic_shift,
    dfa_reverse,
    dfa_star_prefix_free,
    nfa_complement_prefix_free,
    nfa_concat,
    nfa_cyclic_shift,
    nfa_difference,
    nfa_intersection,
    nfa_reverse,
    nfa_star,
    nfa_union,
    reverse_sc,
)
from .io import ParseError, read_automaton, write_automaton
from .regex import parse_regex, regex_to_nfa
from .search import SearchOutcome, SearchSpec, enumerate_prefix_free, extremal_search, fill_template
from .witnesses import DomainError, UnavailableError, WitnessFamily, make_witness

__all__ = [
    "accepts",
    "augment_reversal_witness",
    "AutomatonError",
    "BoolOp",
    "canonical",
    "ComplexityResult",
    "ContractViolation",
    "determinize",
    "Dfa",
    "dfa_bool",
    "dfa_concat_prefix_free",
    "dfa_cyclic_shift",
    "dfa_reverse",
    "dfa_star_prefix_free",
    "DomainError",
    "enumerate_prefix_free",
    "extremal_search",
    "fill_template",
    "FoolingCertificate",
    "is_prefix_free",
    "isomorphic",
    "make_witness",
    "measure",
    "minimize",
    "Nfa",
    "nfa_complement_prefix_free",
    "nfa_concat",
    "nfa_cyclic_shift",
    "nfa_difference",
    "nfa_intersection",
    "nfa_reverse",
    "nfa_star",
    "nfa_union",
    "nsc_exact_bruteforce",
    "parse_regex",
    "ParseError",
    "reachable_subsets",
    "read_automaton",
    "regex_to_nfa",
    "RejectedInput",
    "ResourceLimitError",
    "reverse_sc",
    "sc",
    "SearchOutcome",
    "SearchSpec",
    "SplitConcatenationPlan",
    "to_min_dfa",
    "UnavailableError",
    "verify_extended_fooling",
    "verify_fooling_set",
    "WitnessFamily",
    "write_automaton",
]

__version__ = "0.1.0"
