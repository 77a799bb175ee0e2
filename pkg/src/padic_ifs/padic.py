"""Exact rationals in Z_p: valuations, low-order digits and periodic expansions.

Rationals are plain :class:`fractions.Fraction` values.  Everything here is
restricted to valuation >= 0, i.e. to Z_p ∩ Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

RationalLike = Union[Fraction, int, str]

INFINITY = math.inf


class NotPadicInteger(ValueError):
    """Raised when a rational has negative p-adic valuation (p | denominator)."""


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a :class:`Fraction`; strings may be ``"a/b"`` or ``"a"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def valuation(x: RationalLike, p: int) -> float | int:
    """p-adic valuation of ``x``; ``math.inf`` for zero."""
    x = as_rational(x)
    if x == 0:
        return INFINITY
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _check_integral(x: Fraction, p: int) -> None:
    if x.denominator % p == 0:
        raise NotPadicInteger(f"{format_rational(x)} is not in Z_{p}")


def digit_block(x: RationalLike, p: int, k: int = 1) -> int:
    """The residue of ``x`` modulo ``p**k``, as an integer in ``[0, p**k)``."""
    if k < 1:
        raise ValueError("block length must be positive")
    x = as_rational(x)
    _check_integral(x, p)
    modulus = p**k
    return (x.numerator * pow(x.denominator, -1, modulus)) % modulus


def digit(x: RationalLike, p: int) -> int:
    """Least significant p-adic digit of ``x``."""
    return digit_block(x, p, 1)


def block_digits(value: int, p: int, k: int) -> tuple[int, ...]:
    """Base-p digits of ``value`` (least significant first), padded to length k."""
    out = []
    for _ in range(k):
        value, r = divmod(value, p)
        out.append(r)
    if value:
        raise ValueError("value does not fit in k digits")
    return tuple(out)


def digits_value(digits: Sequence[int], p: int) -> int:
    """Inverse of :func:`block_digits`: sum of ``digits[i] * p**i``."""
    return sum(a * p**i for i, a in enumerate(digits))


@dataclass(frozen=True)
class PadicExpansion:
    """Eventually periodic expansion ``preperiod`` followed by ``period`` repeated."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    prime: int

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        for a in self.preperiod + self.period:
            if not 0 <= a < self.prime:
                raise ValueError(f"digit {a} out of range for p={self.prime}")

    @classmethod
    def parse(cls, text: str, p: int) -> "PadicExpansion":
        """Parse ``"[d0,d1; dk,...,dm]"`` or the bare ``"d0,d1;dk,..."`` form."""
        body = text.strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        if ";" not in body:
            raise ValueError("expansion needs a ';' separating preperiod and period")
        pre_text, per_text = body.split(";", 1)

        def _digits(chunk):
            chunk = chunk.strip()
            return tuple(int(t) for t in chunk.split(",")) if chunk else ()

        return canonical(_digits(pre_text), _digits(per_text), p)

    def value(self) -> Fraction:
        """Closed-form geometric-series value of the expansion."""
        p = self.prime
        head = digits_value(self.preperiod, p)
        cycle = digits_value(self.period, p)
        c = len(self.period)
        return Fraction(head) + Fraction(p ** len(self.preperiod) * cycle, 1 - p**c)

    def digits(self, n: int) -> tuple[int, ...]:
        """First ``n`` digits of the expansion."""
        out = list(self.preperiod[:n])
        i = 0
        while len(out) < n:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)

    def __str__(self):
        pre = ",".join(map(str, self.preperiod))
        per = ",".join(map(str, self.period))
        return f"[{pre}; {per}]"


def _minimal_period(period: Sequence[int]) -> tuple[int, ...]:
    c = len(period)
    for q in range(1, c + 1):
        if c % q == 0 and all(period[i] == period[i % q] for i in range(c)):
            return tuple(period[:q])
    return tuple(period)


def canonical(preperiod: Sequence[int], period: Sequence[int], p: int) -> PadicExpansion:
    """Reduce to the minimal period, then strip preperiod digits absorbed by it."""
    per = list(_minimal_period(period))
    pre = list(preperiod)
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = [per[-1]] + per[:-1]
    return PadicExpansion(tuple(pre), tuple(per), p)


def expand(x: RationalLike, p: int) -> PadicExpansion:
    """Eventually periodic p-adic expansion of ``x`` in Z_p ∩ Q."""
    x = as_rational(x)
    _check_integral(x, p)
    seen: dict[Fraction, int] = {}
    digits: list[int] = []
    while x not in seen:
        seen[x] = len(digits)
        a = digit(x, p)
        digits.append(a)
        x = (x - a) / p
    start = seen[x]
    return canonical(digits[:start], digits[start:], p)
