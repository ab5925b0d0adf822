from .automata import Dfa, Nfa, compile_regex, determinize, minimize, words_to_dfa
from .builder import (
    DEFAULT_ALIASES,
    DEFAULT_MAPPING,
    OBSERVERS,
    SymbolMapping,
    add_edge,
    assemble_network,
    attach_guard,
    build_observer,
    build_union_regex,
    build_user_network,
    default_channels,
    dfa_to_behavioral,
    encode_record,
    observer_location,
    shared_words,
    synthesize_behavior,
)
from .regex import format_regex, parse_regex

__all__ = [
    "DEFAULT_ALIASES",
    "DEFAULT_MAPPING",
    "Dfa",
    "Nfa",
    "OBSERVERS",
    "SymbolMapping",
    "add_edge",
    "assemble_network",
    "attach_guard",
    "build_observer",
    "build_union_regex",
    "build_user_network",
    "compile_regex",
    "default_channels",
    "determinize",
    "dfa_to_behavioral",
    "encode_record",
    "format_regex",
    "minimize",
    "observer_location",
    "parse_regex",
    "shared_words",
    "synthesize_behavior",
    "words_to_dfa",
]
