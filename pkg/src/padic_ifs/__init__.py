"""Digit automata, dimensions and measures for p-adic self-similar sets."""

from .automaton import DigitDFA, DigitNFA, determinize, dfa_from_ifs, minimize, to_nfa
from .ifs import IFS, Contraction, contraction, load_ifs, normalize
from .padic import PadicExpansion, expand
from .spectral import adjacency, hausdorff_dimension, spectral_radius
from .transducer import CarryState, Transducer, build

__all__ = [
    "IFS",
    "CarryState",
    "Contraction",
    "DigitDFA",
    "DigitNFA",
    "PadicExpansion",
    "Transducer",
    "adjacency",
    "build",
    "contraction",
    "determinize",
    "dfa_from_ifs",
    "expand",
    "hausdorff_dimension",
    "load_ifs",
    "minimize",
    "normalize",
    "spectral_radius",
    "to_nfa",
]
