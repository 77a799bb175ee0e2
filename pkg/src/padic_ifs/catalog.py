"""Worked systems and hand-built automata used by the tests, scripts and data files."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .automaton import DigitNFA, nfa_from_dict
from .ifs import IFS, contraction as c


def three_adic() -> IFS:
    """A = 3x, B = 3x + 1, C = 3x + 3."""
    return IFS(3, (c(1, 0), c(1, 1), c(1, 3)))


def mixed_sign() -> IFS:
    """A = -5x, B = 25x + 1/2."""
    return IFS(5, (c(1, 0, b=1), c(2, Fraction(1, 2))))


def rational_offsets() -> IFS:
    """A = 5x + 1/2, B = 5x + 1/3."""
    return IFS(5, (c(1, Fraction(1, 2)), c(1, Fraction(1, 3))))


def rational_offsets_normalized() -> IFS:
    return IFS(5, (c(1, 1), c(1, 0)))


def five_adic_third() -> IFS:
    """A = 5x, B = 5x - 1/3."""
    return IFS(5, (c(1, 0), c(1, Fraction(-1, 3))))


def not_coprime() -> IFS:
    """A = 9x + 3, B = 9x + 6 in Z_3: every cycle of the digit automaton has even length."""
    return IFS(3, (c(2, 3), c(2, 6)))


def decimation_example() -> IFS:
    """A = 3x + 1, B = 3x + 5."""
    return IFS(3, (c(1, 1), c(1, 5)))


def haar(p: int) -> IFS:
    return IFS(p, tuple(c(1, i) for i in range(p)), tuple(Fraction(1, p) for _ in range(p)))


def cantor() -> IFS:
    """3x and 3x + 2 with equal weights."""
    return IFS(3, (c(1, 0), c(1, 2)), (Fraction(1, 2), Fraction(1, 2)))


def shifted_cantor() -> IFS:
    """Cantor system conjugated by x -> x/2 + 1/4: maps 3x - 1/2 and 3x + 1/2."""
    return IFS(3, (c(1, Fraction(-1, 2)), c(1, Fraction(1, 2))))


def three_adic_measure(probs: Sequence = (Fraction(1, 3),) * 3) -> IFS:
    return three_adic().with_probabilities(probs)


MEASURE_PROBABILITIES = (
    (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
    (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)),
    (Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)),
)


def two_adic_overlap(probs: Sequence = (Fraction(1, 3),) * 3) -> IFS:
    """2x, 2x + 1, 2x + 2: overlapping maps with the positive row property."""
    return IFS(2, (c(1, 0), c(1, 1), c(1, 2)), tuple(probs))


def two_adic_gap() -> IFS:
    return IFS(2, (c(1, 0), c(1, 1), c(1, 3)), (Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)))


TWO_ESSENTIAL = {
    "p": 5,
    "states": ["A", "B", "C"],
    "initial": "A",
    "edges": [
        ["A", 0, "A"], ["A", 2, "A"], ["A", 3, "A"], ["A", 1, "B"], ["A", 4, "C"],
        ["B", 1, "B"], ["B", 2, "B"],
        ["C", 3, "C"], ["C", 4, "C"],
    ],
}

# the ternary digit graph of C/2 + 1/4, read as a 3-adic path set
SHIFTED_CANTOR_GRAPH = {
    "p": 3,
    "states": ["A", "B", "C", "D"],
    "initial": "A",
    "edges": [
        ["A", 1, "B"], ["A", 0, "C"], ["A", 2, "D"],
        ["B", 0, "A"], ["B", 1, "A"],
        ["C", 1, "A"],
        ["D", 0, "A"],
    ],
}


def two_essential() -> DigitNFA:
    return nfa_from_dict(TWO_ESSENTIAL)


def shifted_cantor_graph() -> DigitNFA:
    return nfa_from_dict(SHIFTED_CANTOR_GRAPH)


SYSTEMS = {
    "three_adic": three_adic,
    "mixed_sign": mixed_sign,
    "rational_offsets": rational_offsets,
    "rational_offsets_normalized": rational_offsets_normalized,
    "five_adic_third": five_adic_third,
    "not_coprime": not_coprime,
    "decimation_example": decimation_example,
    "haar2": lambda: haar(2),
    "haar3": lambda: haar(3),
    "haar5": lambda: haar(5),
    "cantor": cantor,
    "shifted_cantor": shifted_cantor,
    "three_adic_measure": three_adic_measure,
    "two_adic_overlap": two_adic_overlap,
    "two_adic_gap": two_adic_gap,
}

AUTOMATA = {"two_essential": TWO_ESSENTIAL, "shifted_cantor_graph": SHIFTED_CANTOR_GRAPH}
