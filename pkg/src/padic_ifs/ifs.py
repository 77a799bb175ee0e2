"""p-adic iterated function systems built from maps x -> (-1)^b p^k x + d."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

from .padic import NotPadicInteger, RationalLike, as_rational, format_rational, valuation


class IFSError(ValueError):
    pass


class OffsetNotPadicInteger(IFSError):
    pass


class BadProbabilities(IFSError):
    pass


class EmptySystem(IFSError):
    pass


@dataclass(frozen=True)
class Contraction:
    """The map x -> (-1)^sign * p^exponent * x + offset."""

    sign: int
    exponent: int
    offset: Fraction

    def __post_init__(self):
        if self.sign not in (0, 1):
            raise IFSError(f"sign bit must be 0 or 1, got {self.sign}")
        if self.exponent < 1:
            raise IFSError(f"exponent must be >= 1, got {self.exponent}")
        object.__setattr__(self, "offset", as_rational(self.offset))

    def scale(self, p: int) -> int:
        return (-1) ** self.sign * p**self.exponent

    def __call__(self, x: RationalLike, p: int) -> Fraction:
        return self.scale(p) * as_rational(x) + self.offset

    def describe(self, p: int) -> str:
        s = self.scale(p)
        if self.offset == 0:
            return f"{s}x"
        sign = "+" if self.offset > 0 else "-"
        return f"{s}x {sign} {format_rational(abs(self.offset))}"


def contraction(k: int = 1, d: RationalLike = 0, b: int = 0) -> Contraction:
    return Contraction(b, k, as_rational(d))


@dataclass(frozen=True)
class IFS:
    p: int
    maps: tuple[Contraction, ...]
    probabilities: tuple[Fraction, ...] | None = None
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if self.probabilities is not None:
            object.__setattr__(
                self, "probabilities", tuple(as_rational(q) for q in self.probabilities)
            )
        if not self.names:
            object.__setattr__(self, "names", default_names(len(self.maps)))

    def __len__(self):
        return len(self.maps)

    @property
    def alphabet(self) -> range:
        return range(len(self.maps))

    def with_probabilities(self, probabilities: Sequence[RationalLike]) -> "IFS":
        return IFS(self.p, self.maps, tuple(as_rational(q) for q in probabilities), self.names)

    def is_equicontractive(self) -> bool:
        """All maps of the form p*x + d."""
        return all(f.exponent == 1 and f.sign == 0 for f in self.maps)

    def describe(self) -> str:
        body = ", ".join(f"{n}: {f.describe(self.p)}" for n, f in zip(self.names, self.maps))
        return f"{self.p}-adic {{{body}}}"


def default_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("A") + i) for i in range(n))
    return tuple(f"F{i}" for i in range(n))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def validate(ifs: IFS) -> None:
    """Raise on the first violated invariant of ``ifs``."""
    if not _is_prime(ifs.p):
        raise IFSError(f"p = {ifs.p} is not prime")
    if not ifs.maps:
        raise EmptySystem("an IFS needs at least one map")
    for i, f in enumerate(ifs.maps):
        if valuation(f.offset, ifs.p) < 0:
            raise OffsetNotPadicInteger(
                f"offset {format_rational(f.offset)} of map {i} is not in Z_{ifs.p}"
            )
    if len(set(ifs.maps)) != len(ifs.maps):
        raise IFSError("maps must be pairwise distinct")
    probs = ifs.probabilities
    if probs is not None:
        if len(probs) != len(ifs.maps):
            raise BadProbabilities(f"{len(probs)} probabilities for {len(ifs.maps)} maps")
        if len(probs) > 1 and any(not 0 < q < 1 for q in probs):
            raise BadProbabilities("each probability must lie strictly in (0, 1)")
        if sum(probs) != 1:
            raise BadProbabilities(f"probabilities sum to {format_rational(sum(probs))}, not 1")


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True)
class Conjugation:
    """The affine map L(x) = scale * (x + shift)."""

    shift: Fraction
    scale: Fraction

    def __call__(self, x: RationalLike) -> Fraction:
        return self.scale * (as_rational(x) + self.shift)

    def inverse(self, y: RationalLike) -> Fraction:
        return as_rational(y) / self.scale - self.shift


def normalize(ifs: IFS) -> tuple[IFS, Conjugation]:
    """Conjugate ``ifs`` to integer offsets with the sign pattern and a zero offset.

    The shift is the largest one compatible with every sign constraint,
    which puts the binding map's offset at exactly zero; the scale is the
    lcm of the shifted offsets' denominators.
    """
    validate(ifs)
    p = ifs.p
    bounds = []
    for f in ifs.maps:
        if f.sign == 0:
            bounds.append(f.offset / (p**f.exponent - 1))
        else:
            bounds.append(-f.offset / (p**f.exponent + 1))
    a = min(bounds)
    shifted = [f.offset + (1 - f.scale(p)) * a for f in ifs.maps]
    c = _lcm(d.denominator for d in shifted)
    if c % p == 0:
        raise AssertionError("normalizer scale is divisible by p")
    maps = tuple(Contraction(f.sign, f.exponent, c * d) for f, d in zip(ifs.maps, shifted))
    return IFS(p, maps, ifs.probabilities, ifs.names), Conjugation(a, Fraction(c))


def compose_address(ifs: IFS, word: Sequence[int], terms: int | None = None) -> Fraction:
    """Truncated address sum: the first ``terms`` summands for the map word ``word``.

    Equals F_{w_1} o ... o F_{w_N}(0).
    """
    n = len(word) if terms is None else terms
    if n > len(word):
        raise ValueError("word shorter than requested number of terms")
    total = Fraction(0)
    scale = 1
    for a in word[:n]:
        f = ifs.maps[a]
        total += scale * f.offset
        scale *= f.scale(ifs.p)
    return total


# --- JSON system files -------------------------------------------------------


def ifs_from_dict(data: dict) -> IFS:
    try:
        p = int(data["p"])
        raw_maps = data["maps"]
    except (KeyError, TypeError) as exc:
        raise IFSError(f"system file needs 'p' and 'maps': {exc}") from None
    maps = []
    for m in raw_maps:
        maps.append(Contraction(int(m.get("b", 0)), int(m.get("k", 1)), as_rational(str(m.get("d", 0)))))
    probs = data.get("probs")
    names = tuple(data.get("names", ()))
    ifs = IFS(
        p,
        tuple(maps),
        None if probs is None else tuple(as_rational(str(q)) for q in probs),
        names,
    )
    try:
        validate(ifs)
    except NotPadicInteger as exc:
        raise OffsetNotPadicInteger(str(exc)) from None
    return ifs


def ifs_to_dict(ifs: IFS) -> dict:
    out = {
        "p": ifs.p,
        "maps": [
            {"b": f.sign, "k": f.exponent, "d": format_rational(f.offset)} for f in ifs.maps
        ],
    }
    if ifs.probabilities is not None:
        out["probs"] = [format_rational(q) for q in ifs.probabilities]
    return out


def load_ifs(path: str | Path) -> IFS:
    with open(path) as fh:
        return ifs_from_dict(json.load(fh))


def dump_ifs(ifs: IFS) -> str:
    return json.dumps(ifs_to_dict(ifs))
