from strsat.nfa.alphabet import SymbolTable
from strsat.nfa.automaton import Nfa, KERNEL_IMPL
from strsat.nfa.regex import (
    Regex,
    RNone,
    RAll,
    RAllChar,
    RLit,
    RConcat,
    RUnion,
    RInter,
    RComp,
    RStar,
    RPlus,
    ROpt,
    RRange,
    RLoop,
    RDiff,
    compile_regex,
)

__all__ = [
    "SymbolTable",
    "Nfa",
    "KERNEL_IMPL",
    "Regex",
    "RNone",
    "RAll",
    "RAllChar",
    "RLit",
    "RConcat",
    "RUnion",
    "RInter",
    "RComp",
    "RStar",
    "RPlus",
    "ROpt",
    "RRange",
    "RLoop",
    "RDiff",
    "compile_regex",
]
