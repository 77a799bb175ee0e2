"""Self-similar measures mu = sum_i p_i mu o F_i^{-1} for equicontractive systems.

Cylinder masses are products of per-edge weight matrices along the
power-set DFA: rows and columns are indexed by the carries that make up the
source and target DFA states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .automaton import DigitDFA, classes, determinize, to_nfa
from .ifs import IFS, validate
from .padic import PadicExpansion, as_rational, expand
from .spectral import spectral_radius
from .transducer import Transducer, build

Matrix = tuple[tuple[Fraction, ...], ...]


class NotEquicontractive(ValueError):
    pass


class MissingProbabilities(ValueError):
    pass


class NotInSupport(ValueError):
    pass


class PositiveRowViolated(ValueError):
    pass


@dataclass
class MeasureSystem:
    p: int
    dfa: DigitDFA
    probabilities: tuple[Fraction, ...]
    carries: list[tuple]  # carries[q] = ordered carry states indexing DFA state q
    matrices: dict[tuple[int, int], Matrix]  # (source state, digit) -> weight matrix
    _float: dict = field(default_factory=dict, repr=False)

    def matrix(self, state: int, a: int) -> Matrix:
        return self.matrices[state, a]

    def float_matrix(self, state: int, a: int) -> np.ndarray:
        key = (state, a)
        if key not in self._float:
            self._float[key] = np.array(self.matrices[key], dtype=float)
        return self._float[key]

    def format_matrix(self, state: int, a: int) -> str:
        m = self.matrices[state, a]
        rows = []
        for row in m:
            rows.append("[" + " ".join(_fmt_entry(x) for x in row) + "]")
        return "[" + " ".join(rows) + "]"


def _fmt_entry(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def build_measure(ifs: IFS, transducer: Transducer | None = None) -> MeasureSystem:
    validate(ifs)
    if ifs.probabilities is None:
        raise MissingProbabilities("a self-similar measure needs probabilities")
    if not ifs.is_equicontractive():
        raise NotEquicontractive("measure construction needs every map to be p*x + d")
    t = build(ifs) if transducer is None else transducer
    dfa = determinize(to_nfa(t))
    carries = [sorted(dfa.provenance[q]) for q in dfa.states]
    weight: dict[tuple, Fraction] = {}
    for tr in t.transitions:
        key = (tr.source, tr.output[0], tr.target)
        weight[key] = weight.get(key, Fraction(0)) + ifs.probabilities[tr.symbol]
    matrices = {}
    for q, a, r in dfa.edges:
        rows = carries[q]
        cols = carries[r]
        matrices[q, a] = tuple(
            tuple(weight.get((ri, a, cj), Fraction(0)) for cj in cols) for ri in rows
        )
    return MeasureSystem(ifs.p, dfa, ifs.probabilities, carries, matrices)


def _vec_mat(v: Sequence[Fraction], m: Matrix) -> list[Fraction]:
    cols = len(m[0]) if m else 0
    return [sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(cols)]


def cylinder_measure(ms: MeasureSystem, digits: Sequence[int]) -> Fraction:
    """Exact mass of the cylinder b_0 + b_1 p + ... + b_{k-1} p^{k-1} + p^k Z_p."""
    v = [Fraction(1)]
    q = ms.dfa.initial
    for a in digits:
        nxt = ms.dfa.delta[q].get(a)
        if nxt is None:
            return Fraction(0)
        v = _vec_mat(v, ms.matrices[q, a])
        q = nxt
    return sum(v, Fraction(0))


def positive_row_check(ms: MeasureSystem) -> bool:
    return all(any(x != 0 for x in row) for m in ms.matrices.values() for row in m)


@dataclass(frozen=True)
class LocalDimension:
    """Local dimension at an eventually periodic point.

    ``value`` is -log(rho(P)) / (c log p) for the weight-matrix product P
    around the DFA cycle of digit length c traced by the point's period.
    ``window`` holds the smallest and largest finite-n estimates
    -log mu(B_n) / (n log p) over the last half of the sampled range; these
    approach ``value`` only like O(1/n).  ``ratio`` is the one-cycle estimate
    -log(mu(B_n) / mu(B_{n-c})) / (c log p) at the end of the window, which
    converges geometrically when P is primitive.
    """

    value: float
    cycle_length: int
    primitive: bool
    window: tuple[float, float]
    ratio: float

    @property
    def lower(self) -> float:
        return self.value

    @property
    def upper(self) -> float:
        return self.value


PointLike = Union[PadicExpansion, Fraction, int, str]


def as_point(x: PointLike, p: int) -> PadicExpansion:
    if isinstance(x, PadicExpansion):
        return x
    if isinstance(x, str) and ";" in x:
        return PadicExpansion.parse(x, p)
    return expand(as_rational(x), p)


def _product(ms: MeasureSystem, start: int, word: Sequence[int]) -> tuple[np.ndarray, int]:
    q = start
    P = np.eye(len(ms.carries[q]))
    for a in word:
        nxt = ms.dfa.delta[q].get(a)
        if nxt is None:
            raise NotInSupport("digit path leaves the automaton")
        P = P @ ms.float_matrix(q, a)
        q = nxt
    return P, q


def _rho(P: np.ndarray) -> float:
    # scale first so the absolute stopping tolerance is relative to the entries
    top = P.max()
    return spectral_radius(P / top, tol=1e-13) * top if top > 0 else 0.0


def is_primitive(P: np.ndarray) -> bool:
    n = P.shape[0]
    B = (P > 0).astype(np.int64)
    M = B.copy()
    for _ in range((n - 1) ** 2 + 1):
        if M.all():
            return True
        M = ((M @ B) > 0).astype(np.int64)
    return bool(M.all())


def local_dimension(ms: MeasureSystem, x: PointLike, window_periods: int = 60) -> LocalDimension:
    point = as_point(x, ms.p)
    q = ms.dfa.read(point.preperiod)
    if q is None:
        raise NotInSupport(f"{point} is not in the support")
    boundary = [q]
    while True:
        r = ms.dfa.read(point.period, boundary[-1])
        if r is None:
            raise NotInSupport(f"{point} is not in the support")
        if r in boundary:
            break
        boundary.append(r)
    first = boundary.index(r)
    reps = len(boundary) - first
    cycle = list(point.period) * reps
    P, end = _product(ms, boundary[first], cycle)
    assert end == boundary[first]
    rho = _rho(P)
    if rho <= 0:
        raise NotInSupport(f"{point} has zero-mass cylinders")
    c = len(cycle)
    value = -math.log(rho) / (c * math.log(ms.p))

    n_total = len(point.preperiod) + window_periods * c
    digits = point.digits(n_total)
    estimates = []
    logs = [0.0]
    v = np.ones(1)
    s = ms.dfa.initial
    log_mass = 0.0
    for n, a in enumerate(digits, start=1):
        v = v @ ms.float_matrix(s, a)
        s = ms.dfa.delta[s][a]
        total = v.sum()
        log_mass += math.log(total)
        v = v / total
        logs.append(log_mass)
        if n > n_total // 2:
            estimates.append(-log_mass / (n * math.log(ms.p)))
    ratio = -(logs[-1] - logs[-1 - c]) / (c * math.log(ms.p))
    return LocalDimension(value, c, is_primitive(P), (min(estimates), max(estimates)), ratio)


@dataclass
class SpectrumEstimate:
    lower: float
    upper: float
    samples: list[tuple[int, tuple[int, ...], float]]  # (state, cycle word, local dimension)

    @property
    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper


def periodic_spectrum(ms: MeasureSystem, max_cycle_len: int, require_positive_rows: bool = True) -> SpectrumEstimate:
    """Local dimensions at positive periodic points with period at most ``max_cycle_len``.

    Closed walks inside essential classes whose weight-matrix product is
    strictly positive give the samples; [lower, upper] is an inner
    approximation of the range of local dimensions at essential points.
    Without the positive row property the samples are still exact local
    dimensions, but the interval statement has no backing; pass
    ``require_positive_rows=False`` to get them anyway.
    """
    if require_positive_rows and not positive_row_check(ms):
        raise PositiveRowViolated("some transition matrix has a zero row")
    log_p = math.log(ms.p)
    samples = []
    for comp in classes(ms.dfa).essential:
        for q in sorted(comp):
            n = len(ms.carries[q])
            stack = [((), q, np.eye(n))]
            while stack:
                word, s, P = stack.pop()
                if word and s == q and (P > 0).all():
                    rho = _rho(P)
                    samples.append((q, word, -math.log(rho) / (len(word) * log_p)))
                if len(word) == max_cycle_len:
                    continue
                for a, t in ms.dfa.delta[s].items():
                    stack.append((word + (a,), t, P @ ms.float_matrix(s, a)))
    if not samples:
        raise ValueError(f"no positive periodic points with period <= {max_cycle_len}")
    dims = [x for *_, x in samples]
    return SpectrumEstimate(min(dims), max(dims), sorted(samples))
