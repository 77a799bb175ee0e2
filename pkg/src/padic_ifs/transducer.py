"""The carry transducer rewriting address words into standard p-adic digits.

A state ``(s, e)`` with ``e`` in {+1, -1} means the number still to be
written out is ``s + e * t``, where ``t`` is the value of the unread part
of the address.  Reading map ``i`` emits the low ``k_i`` digits of
``s + e * d_i`` and carries the rest; the orientation flips for negative
contractions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .ifs import IFS, validate
from .padic import block_digits, digit_block, expand, format_rational


class CarryBoundExceeded(AssertionError):
    pass


class NotPositiveOrientation(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CarryState:
    carry: Fraction
    orientation: int = 1

    def __post_init__(self):
        # states are hashed constantly by the power-set construction; Fraction hashes are slow
        object.__setattr__(self, "_hash", hash((self.carry, self.orientation)))

    def __hash__(self):
        return self._hash

    def label(self) -> str:
        return f"{format_rational(self.carry)},{'+' if self.orientation > 0 else '-'}"

    def __str__(self):
        return f"({self.label()})"


INITIAL = CarryState(Fraction(0), 1)


@dataclass(frozen=True)
class Transition:
    source: CarryState
    symbol: int
    output: tuple[int, ...]
    target: CarryState


def carry_bound(ifs: IFS) -> Fraction:
    """Bound on |carry| over all reachable states: max|d| / (p^min k - 1) + 1."""
    max_d = max(abs(f.offset) for f in ifs.maps)
    k_min = min(f.exponent for f in ifs.maps)
    return max_d / (ifs.p**k_min - 1) + 1


def step(ifs: IFS, state: CarryState, symbol: int) -> tuple[tuple[int, ...], CarryState]:
    f = ifs.maps[symbol]
    p, k = ifs.p, f.exponent
    total = state.carry + state.orientation * f.offset
    low = digit_block(total, p, k)
    carry = (total - low) / p**k
    orientation = -state.orientation if f.sign else state.orientation
    return block_digits(low, p, k), CarryState(carry, orientation)


class Transducer:
    """Input-deterministic transducer: one transition per (state, map index)."""

    def __init__(self, ifs: IFS, states: list[CarryState], transitions: list[Transition]):
        self.ifs = ifs
        self.states = states
        self.transitions = transitions
        self._delta = {(t.source, t.symbol): t for t in transitions}

    initial = INITIAL

    def __len__(self):
        return len(self.states)

    def transition(self, state: CarryState, symbol: int) -> Transition:
        return self._delta[state, symbol]

    def edges_from(self, state: CarryState) -> Iterator[Transition]:
        for i in self.ifs.alphabet:
            yield self._delta[state, i]

    def edge_labels(self) -> set[tuple[str, str, str]]:
        """Edges as (source label, "NAME/digits", target label) triples."""
        names = self.ifs.names
        return {
            (t.source.label(), f"{names[t.symbol]}/{','.join(map(str, t.output))}", t.target.label())
            for t in self.transitions
        }

    def run(self, word: Sequence[int], start: CarryState | None = None):
        state = self.initial if start is None else start
        digits: list[int] = []
        for a in word:
            t = self._delta[state, a]
            digits.extend(t.output)
            state = t.target
        return digits, state

    def to_dot(self) -> str:
        index = {s: i for i, s in enumerate(self.states)}
        lines = ["digraph transducer {", "  rankdir=LR;", '  start [shape=point];']
        for s, i in index.items():
            lines.append(f'  s{i} [shape=circle, label="{s.label()}"];')
        lines.append(f"  start -> s{index[self.initial]};")
        for t in self.transitions:
            label = f"{self.ifs.names[t.symbol]}/{','.join(map(str, t.output))}"
            lines.append(f'  s{index[t.source]} -> s{index[t.target]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build(ifs: IFS) -> Transducer:
    """Breadth-first construction from the zero carry; states in discovery order."""
    validate(ifs)
    bound = carry_bound(ifs)
    states = [INITIAL]
    seen = {INITIAL}
    transitions = []
    queue = deque([INITIAL])
    while queue:
        state = queue.popleft()
        for i in ifs.alphabet:
            output, target = step(ifs, state, i)
            if abs(target.carry) > bound:
                raise CarryBoundExceeded(f"carry {target} exceeds bound {bound}")
            transitions.append(Transition(state, i, output, target))
            if target not in seen:
                seen.add(target)
                states.append(target)
                queue.append(target)
    return Transducer(ifs, states, transitions)


def run(t: Transducer, word: Sequence[int]):
    """Digits output along ``word`` from the initial state, and the final state."""
    return t.run(word)


def integer_descendant(t: Transducer, state: CarryState, word: Sequence[int]) -> list[int]:
    """Repeat ``word`` (which must lead to ``state``) until the carry is an integer.

    The repetition count is the carry's denominator times the period length
    of its p-adic expansion.
    """
    if state.orientation < 0:
        raise NotPositiveOrientation(f"{state} has negative orientation")
    reached = t.run(word)[1]
    if reached != state:
        raise ValueError(f"word leads to {reached}, not {state}")
    b = state.carry.denominator
    c = len(expand(state.carry, t.ifs.p).period)
    return list(word) * (b * c)


def geometric_carry_digits(p: int, carry: Fraction, length: int, copies: int):
    """Split sum_{i<copies} p^(length*i) * carry as (low digits, integer-or-rational remainder).

    This is the bookkeeping quantity used when arguing that a repeated word
    drives a carry to an integer; it coincides with the transducer run from
    the zero carry only when the word's address value equals ``carry``.
    """
    total = sum(Fraction(p ** (length * i)) * carry for i in range(copies))
    n = length * copies
    low = digit_block(total, p, n)
    return list(block_digits(low, p, n)), (total - low) / p**n
