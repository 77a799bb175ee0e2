"""Adjacency matrices, Perron roots and the dimension formula log(rho)/log(p)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .automaton import DigitDFA, DigitNFA, strongly_connected_components

DEFAULT_TOL = 1e-12
MAX_ITER = 10**6


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class CountMatrix:
    """T[i, j] = number of digit edges from states[i] to states[j]."""

    matrix: np.ndarray
    states: tuple

    def __str__(self):
        rows = ("[" + ", ".join(str(int(x)) for x in row) + "]" for row in self.matrix)
        return "[" + ", ".join(rows) + "]"

    def tolist(self) -> list[list[int]]:
        return self.matrix.astype(int).tolist()


def adjacency(a: DigitDFA | DigitNFA, subset: Sequence | None = None) -> CountMatrix:
    """Count matrix in the automaton's state order, optionally restricted to ``subset``."""
    order = list(a.states)
    if subset is not None:
        keep = set(subset)
        order = [s for s in order if s in keep]
    index = {s: i for i, s in enumerate(order)}
    m = np.zeros((len(order), len(order)), dtype=np.int64)
    for s, _, t in a.edges:
        if s in index and t in index:
            m[index[s], index[t]] += 1
    return CountMatrix(m, tuple(order))


def _as_array(T) -> np.ndarray:
    if isinstance(T, CountMatrix):
        T = T.matrix
    arr = np.asarray(T, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("spectral radius needs a square matrix")
    if (arr < 0).any():
        raise ValueError("matrix must be nonnegative")
    return arr


def _irreducible_radius(B: np.ndarray, tol: float, max_iter: int) -> float:
    n = B.shape[0]
    if n == 1:
        return float(B[0, 0])
    rows_sum = B.sum(axis=1)
    shift = 0.5 * (rows_sum.min() + rows_sum.max())
    # automaton matrices are sparse (at most p entries per row): iterate on the edge list
    rows, cols = np.nonzero(B)
    vals = B[rows, cols]
    v = np.ones(n)
    for _ in range(max_iter):
        w = np.bincount(rows, weights=vals * v[cols], minlength=n)
        ratios = w / v
        lo, hi = ratios.min(), ratios.max()
        if hi - lo < tol:
            return float(0.5 * (lo + hi))
        v = w + shift * v
        v /= v.max()
    raise NonConvergence(f"power iteration did not reach tol={tol} in {max_iter} steps")


def spectral_components(T) -> list[tuple[tuple[int, ...], float]]:
    """(indices, spectral radius) for each strongly connected block of ``T``."""
    A = _as_array(T)
    n = A.shape[0]
    succ = lambda i: [int(j) for j in np.nonzero(A[i])[0]]
    out = []
    for comp in strongly_connected_components(list(range(n)), succ):
        idx = tuple(sorted(comp))
        out.append((idx, A[np.ix_(idx, idx)]))
    return [(idx, B) for idx, B in sorted(out)]


def spectral_radius(T, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> float:
    """Perron root: max over strongly connected diagonal blocks.

    Each block is iterated with a positive shift so periodic blocks still
    converge; the Collatz-Wielandt bounds bracket the root, and iteration
    stops once their gap is below ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = _as_array(T)
    if A.size == 0:
        return 0.0
    best = 0.0
    for _, B in spectral_components(A):
        if not B.any():
            continue
        best = max(best, _irreducible_radius(B, tol, max_iter))
    return best


def block_spectra(T, tol: float = DEFAULT_TOL) -> list[tuple[tuple[int, ...], float]]:
    return [
        (idx, _irreducible_radius(B, tol, MAX_ITER) if B.any() else 0.0)
        for idx, B in spectral_components(T)
    ]


# --- exact route ---------------------------------------------------------------


def charpoly(T) -> list[Fraction]:
    """Characteristic polynomial det(xI - T) by Faddeev-LeVerrier, highest degree first."""
    if isinstance(T, CountMatrix):
        T = T.matrix
    A = [[Fraction(x) if not isinstance(x, Fraction) else x for x in row] for row in np.asarray(T, dtype=object).tolist()]
    n = len(A)
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A*M + c_{k-1} I
        prev = coeffs[-1]
        M = [[M[i][j] + (prev if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(c)
        M = AM
    return coeffs


def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _poly_trim(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _poly_divmod(a, b):
    a = list(a)
    quotient = []
    while len(a) >= len(b):
        coef = a[0] / b[0]
        quotient.append(coef)
        for i in range(len(b)):
            a[i] -= coef * b[i]
        a.pop(0)
    return _poly_trim(quotient or [Fraction(0)]), _poly_trim(a or [Fraction(0)])


def _is_zero(p) -> bool:
    return all(c == 0 for c in p)


def _poly_gcd(a, b):
    while not _is_zero(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [c / a[0] for c in a]


def _derivative(p):
    n = len(p) - 1
    return _poly_trim([c * (n - i) for i, c in enumerate(p[:-1])] or [Fraction(0)])


def _sturm_chain(p):
    chain = [p, _derivative(p)]
    while len(chain[-1]) > 1:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if _is_zero(r):
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = [s for s in (_poly_eval(q, x) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def exact_spectral_radius(T, width: Fraction = Fraction(1, 10**14)) -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] of width <= ``width`` around the Perron root.

    The Perron root is the largest real root of the characteristic
    polynomial; it is isolated by bisection with Sturm sequences on the
    square-free part.
    """
    p = charpoly(T)
    if len(p) == 1:
        return Fraction(0), Fraction(0)
    g = _poly_gcd(p, _derivative(p))
    sq = _poly_divmod(p, g)[0] if len(g) > 1 else p
    chain = _sturm_chain(sq)
    A = _as_array(T)
    hi = Fraction(int(math.ceil(A.sum(axis=1).max())) + 1)
    lo = Fraction(-1)
    if _sign_changes(chain, lo) - _sign_changes(chain, hi) == 0:
        raise AssertionError("no real root found in the Perron interval")
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) - _sign_changes(chain, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return max(lo, Fraction(0)), hi


# --- dimension -------------------------------------------------------------------


def dimension_from_radius(rho: float, p: int) -> float:
    return math.log(rho) / math.log(p) if rho > 1 else 0.0


def hausdorff_dimension(d: DigitDFA, p: int | None = None, tol: float = DEFAULT_TOL) -> float:
    """log(rho) / log(p) for the path set fractal recognised by ``d``."""
    p = d.p if p is None else p
    return dimension_from_radius(spectral_radius(adjacency(d), tol), p)


def exact_hausdorff_dimension(d: DigitDFA, p: int | None = None) -> float:
    p = d.p if p is None else p
    lo, hi = exact_spectral_radius(adjacency(d))
    return dimension_from_radius(float((lo + hi) / 2), p)
