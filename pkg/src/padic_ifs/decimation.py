"""Decimation psi_{j,k}: keep the digits at positions j, j+k, j+2k, ..."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .automaton import DigitDFA, DigitNFA, classes, minimize, prune, subset_construction
from .spectral import hausdorff_dimension


@dataclass(frozen=True)
class DecimationSpec:
    stride: int
    offset: int = 0

    def __post_init__(self):
        if self.stride < 1 or self.offset < 0:
            raise ValueError(f"need stride >= 1 and offset >= 0, got {self}")

    def apply(self, word):
        return tuple(word[self.offset :: self.stride])


def _reach(d: DigitDFA) -> np.ndarray:
    """Boolean one-step reachability, ignoring labels."""
    R = np.zeros((len(d), len(d)), dtype=bool)
    for s, _, t in d.edges:
        R[s, t] = True
    return R


def _bool_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float products go through BLAS; 0/1 sums stay exact far beyond any state count here
    return (a.astype(np.float64) @ b.astype(np.float64)) > 0.5


def _bool_power(R: np.ndarray, e: int) -> np.ndarray:
    out = np.eye(R.shape[0], dtype=bool)
    base = R.copy()
    while e:
        if e & 1:
            out = _bool_mul(out, base)
        e >>= 1
        if e:
            base = _bool_mul(base, base)
    return out


def decimate(d: DigitDFA, spec: DecimationSpec, max_states: int | None = None) -> DigitDFA:
    """Minimal DFA for psi_{j,k} applied to the language of ``d``.

    The intermediate NFA lives on the states of ``d``: it starts in every
    state reachable by exactly j digits, and a digit-a edge goes from q to
    each state reachable by an a-edge followed by k-1 arbitrary digits.
    """
    d = prune(d)
    R = _reach(d)
    start_row = _bool_power(R, spec.offset)[0]
    skip = _bool_power(R, spec.stride - 1)
    edges = []
    for s, a, t in d.edges:
        for r in np.nonzero(skip[t])[0]:
            edges.append((s, a, int(r)))
    nfa = DigitNFA(d.p, list(d.states), 0, edges)
    start = frozenset(int(s) for s in np.nonzero(start_row)[0])
    return minimize(subset_construction(nfa, start, max_states))


def digit_support(d: DigitDFA) -> set[int]:
    """Digits labelling edges inside essential classes."""
    dec = classes(d)
    inside = set().union(*dec.essential) if dec.essential else set()
    return {a for s, a, t in d.edges if s in inside and t in inside}


def component_period(d: DigitDFA, component) -> int:
    """gcd of all cycle lengths in a strongly connected set, by BFS levels."""
    comp = set(component)
    root = min(comp)
    level = {root: 0}
    queue = [root]
    while queue:
        nxt = []
        for s in queue:
            for t in d.delta[s].values():
                if t in comp and t not in level:
                    level[t] = level[s] + 1
                    nxt.append(t)
        queue = nxt
    g = 0
    for s in comp:
        for t in d.delta[s].values():
            if t in comp:
                g = math.gcd(g, level[s] + 1 - level[t])
    return abs(g)


@dataclass(frozen=True)
class CoprimeVerdict:
    holds: bool
    state: int | None = None
    lengths: tuple[int, int] | None = None

    def __bool__(self):
        return self.holds


def _coprime_walks(d: DigitDFA, comp, q: int) -> tuple[int, int]:
    """First pair of coprime closed-walk lengths at q inside an aperiodic class."""
    order = sorted(comp)
    index = {s: i for i, s in enumerate(order)}
    src, dst = [], []
    for s in order:
        for t in set(d.delta[s].values()):
            if t in index:
                src.append(index[s])
                dst.append(index[t])
    src, dst = np.array(src), np.array(dst)
    v = np.zeros(len(order), dtype=bool)
    v[index[q]] = True
    lengths = []
    # Wielandt: every length from (n-1)^2 + 1 on is realised in a primitive class
    for n in range(1, (len(order) - 1) ** 2 + 3):
        nxt = np.zeros_like(v)
        nxt[dst[v[src]]] = True
        v = nxt
        if v[index[q]]:
            for a in lengths:
                if math.gcd(a, n) == 1:
                    return a, n
            lengths.append(n)
    raise AssertionError("aperiodic class without coprime closed walks in range")


def coprime_cycle_test(d: DigitDFA) -> CoprimeVerdict:
    """Some essential-class state has two closed walks of coprime length."""
    d = prune(d)
    for comp in classes(d).essential:
        if component_period(d, comp) != 1:
            continue
        q = min(comp)
        return CoprimeVerdict(True, q, _coprime_walks(d, comp, q))
    return CoprimeVerdict(False)


@dataclass
class DecimationProfile:
    p: int
    support: set[int]
    plateau: float
    dims: dict[tuple[int, int], float]  # (k, j) -> dimension
    k_max: int
    j_max: int

    def row_attains(self, k: int, tol: float = 1e-9) -> bool:
        return all(abs(self.dims[k, j] - self.plateau) <= tol for j in range(self.j_max + 1))

    def plateau_from(self, tol: float = 1e-9) -> int | None:
        """Smallest k0 such that every row k >= k0 (up to k_max) sits on the plateau."""
        k0 = None
        for k in range(self.k_max, 0, -1):
            if self.row_attains(k, tol):
                k0 = k
            else:
                break
        return k0

    def table(self) -> str:
        head = "k\\j " + " ".join(f"{j:>9d}" for j in range(self.j_max + 1)) + "  plateau"
        lines = [head]
        for k in range(1, self.k_max + 1):
            cells = " ".join(f"{self.dims[k, j]:9.6f}" for j in range(self.j_max + 1))
            lines.append(f"{k:>3d} {cells}  {'yes' if self.row_attains(k) else 'no'}")
        return "\n".join(lines)


def decimation_dimension_profile(
    d: DigitDFA, p: int | None = None, k_max: int = 6, j_max: int = 3, max_states: int | None = None
) -> DecimationProfile:
    p = d.p if p is None else p
    support = digit_support(d)
    plateau = math.log(len(support)) / math.log(p) if support else 0.0
    dims = {}
    for k in range(1, k_max + 1):
        for j in range(j_max + 1):
            dims[k, j] = hausdorff_dimension(decimate(d, DecimationSpec(k, j), max_states), p)
    return DecimationProfile(p, support, plateau, dims, k_max, j_max)
