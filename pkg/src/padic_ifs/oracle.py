"""Brute-force ground truth that never touches a transducer or automaton.

A point of the attractor is F_{a_1} o F_{a_2} o ... (0).  After m maps the
remaining tail is p^(k_{a_1}+...+k_{a_m}) times a p-adic integer, so the
first N digits are fixed by the exact partial sum as soon as the exponents
add up to N.  Address words are expanded until that happens.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import reduce
import math

from .ifs import IFS, compose_address, validate
from .padic import block_digits, digit_block

ENUMERATION_BUDGET = 2_000_000


class DepthTooLarge(ValueError):
    pass


def _offset_lcm(ifs: IFS) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), (f.offset.denominator for f in ifs.maps), 1)


def brute_prefixes(ifs: IFS, depth: int, budget: int = ENUMERATION_BUDGET) -> set[tuple[int, ...]]:
    """Length-``depth`` digit prefixes of the p-adic expansions of points of K.

    Address words are explored depth first with exact rational partial
    sums; branches whose partial sum, shift and sign agree modulo p^depth
    generate identical prefixes and are explored once.
    """
    validate(ifs)
    if depth == 0:
        return {()}
    p = ifs.p
    modulus = p**depth
    k_min = min(f.exponent for f in ifs.maps)
    n_words = len(ifs) ** -(-depth // k_min)
    if n_words > budget:
        raise DepthTooLarge(f"~{n_words} address words exceed the budget {budget}")
    out: set[tuple[int, ...]] = set()
    seen: set = set()
    stack = [(Fraction(0), 1, 0)]  # partial sum, signed scale, total exponent
    while stack:
        total, scale, shift = stack.pop()
        if shift >= depth:
            out.add(block_digits(digit_block(total, p, depth), p, depth))
            continue
        key = (digit_block(total, p, depth), scale % modulus, shift)
        if key in seen:
            continue
        seen.add(key)
        for f in ifs.maps:
            stack.append((total + scale * f.offset, scale * f.scale(p), shift + f.exponent))
    return out


def brute_cylinder_masses(ifs: IFS, depth: int, budget: int = ENUMERATION_BUDGET) -> dict[tuple[int, ...], Fraction]:
    """Exact mass of every depth-``depth`` cylinder: sum of p_w over words w with F_w(K) inside it."""
    validate(ifs)
    if ifs.probabilities is None:
        raise ValueError("cylinder masses need probabilities")
    if not ifs.is_equicontractive():
        raise ValueError("cylinder masses need maps of the form p*x + d")
    if len(ifs) ** depth > budget:
        raise DepthTooLarge(f"{len(ifs)}^{depth} words exceed the budget {budget}")
    p = ifs.p
    masses: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    words: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    for _ in range(depth):
        words = [
            (w + (i,), weight * q) for w, weight in words for i, q in enumerate(ifs.probabilities)
        ]
    for w, weight in words:
        total = compose_address(ifs, w)
        masses[block_digits(digit_block(total, p, depth), p, depth) if depth else ()] += weight
    return dict(masses)


def brute_cylinder_mass(ifs: IFS, digits) -> Fraction:
    digits = tuple(digits)
    return brute_cylinder_masses(ifs, len(digits)).get(digits, Fraction(0))
