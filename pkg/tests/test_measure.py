import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from padic_ifs import catalog
from padic_ifs.automaton import dfa_from_ifs, language_prefixes
from padic_ifs.ifs import IFS, contraction as c
from padic_ifs.measure import (
    MissingProbabilities,
    NotEquicontractive,
    NotInSupport,
    PositiveRowViolated,
    as_point,
    build_measure,
    cylinder_measure,
    is_primitive,
    local_dimension,
    periodic_spectrum,
    positive_row_check,
)
from padic_ifs.oracle import brute_cylinder_masses
from padic_ifs.padic import PadicExpansion, expand
from padic_ifs.spectral import hausdorff_dimension

from conftest import measure_systems

F = Fraction
LOG3 = math.log(3)


def measure_suite():
    out = {"cantor": catalog.cantor()}
    for p in (2, 3, 5):
        out[f"haar{p}"] = catalog.haar(p)
    for i, probs in enumerate(catalog.MEASURE_PROBABILITIES):
        out[f"three_adic_{i}"] = catalog.three_adic_measure(probs)
        out[f"two_adic_overlap_{i}"] = catalog.two_adic_overlap(probs)
    out["two_adic_gap"] = catalog.two_adic_gap()
    return out


SUITE = measure_suite()


def test_three_adic_matrices():
    p0, p1, p2 = F(1, 6), F(1, 3), F(1, 2)
    ms = build_measure(catalog.three_adic_measure((p0, p1, p2)))
    assert ms.matrix(0, 0) == ((p0, p2),)
    assert ms.matrix(0, 1) == ((p1,),)
    assert ms.matrix(1, 1) == ((p1, 0), (p0, p2))
    assert ms.matrix(1, 0) == ((p0, p2), (0, 0))
    assert ms.matrix(1, 2) == ((0,), (p1,))
    assert ms.format_matrix(1, 1) == "[[1/3 0] [1/6 1/2]]"


def test_haar_matrices():
    for p in (2, 3, 5):
        ms = build_measure(catalog.haar(p))
        assert set(ms.matrices.values()) == {((F(1, p),),)}


def test_build_errors():
    with pytest.raises(MissingProbabilities):
        build_measure(catalog.three_adic())
    with pytest.raises(NotEquicontractive):
        build_measure(IFS(3, (c(1, 0), c(2, 1)), (F(1, 2), F(1, 2))))
    with pytest.raises(NotEquicontractive):
        build_measure(IFS(3, (c(1, 0, b=1), c(1, 1)), (F(1, 2), F(1, 2))))


def test_cantor_cylinders():
    ms = build_measure(catalog.cantor())
    assert cylinder_measure(ms, ()) == 1
    for k in range(1, 7):
        for w in itertools.product(range(3), repeat=k):
            want = F(1, 2**k) if set(w) <= {0, 2} else 0
            assert cylinder_measure(ms, w) == want
    assert cylinder_measure(ms, (0, 2, 0)) == F(1, 8)


def test_three_adic_digit_zero_cylinder():
    ms = build_measure(catalog.three_adic_measure())
    assert cylinder_measure(ms, (0,)) == F(2, 3)


@pytest.mark.parametrize("name", sorted(SUITE))
def test_additivity_and_normalization(name):
    ifs = SUITE[name]
    ms = build_measure(ifs)
    p = ifs.p
    depth = 6 if p <= 3 else 4
    for k in range(depth):
        words = list(itertools.product(range(p), repeat=k))
        assert sum(cylinder_measure(ms, w) for w in words) == 1
        for w in words:
            assert cylinder_measure(ms, w) == sum(cylinder_measure(ms, w + (a,)) for a in range(p))


@pytest.mark.parametrize("name", sorted(SUITE))
def test_oracle_masses(name):
    ifs = SUITE[name]
    ms = build_measure(ifs)
    depth = 6 if len(ifs) ** 6 <= 50_000 else 5
    for k in range(depth + 1):
        brute = brute_cylinder_masses(ifs, k)
        for w in itertools.product(range(ifs.p), repeat=k):
            assert cylinder_measure(ms, w) == brute.get(w, 0)


@settings(max_examples=20, deadline=None)
@given(measure_systems())
def test_oracle_masses_random(ifs):
    ms = build_measure(ifs)
    for k in range(4):
        brute = brute_cylinder_masses(ifs, k)
        assert sum(brute.values()) == 1
        for w, mass in brute.items():
            assert cylinder_measure(ms, w) == mass


def test_support_matches_language():
    ifs = catalog.two_adic_gap()
    ms = build_measure(ifs)
    d = dfa_from_ifs(ifs)
    for k in range(6):
        assert {w for w in itertools.product(range(2), repeat=k) if cylinder_measure(ms, w)} == language_prefixes(d, k)


@pytest.mark.parametrize("probs", catalog.MEASURE_PROBABILITIES)
def test_local_dimension_at_minus_one_eighth(probs):
    p0, p1, p2 = probs
    ms = build_measure(catalog.three_adic_measure(probs))
    ld = local_dimension(ms, F(-1, 8))
    want = -math.log(p0 * (p1 + p2)) / (2 * LOG3)
    assert abs(ld.value - want) < 1e-9
    assert ld.cycle_length == 2
    assert ld.lower == ld.upper == ld.value
    assert abs(ld.ratio - want) < 1e-9
    lo, hi = ld.window
    # finite-n estimates carry an O(1/n) offset from the preperiod and start vector
    assert lo - 0.02 <= want <= hi + 0.02


def test_local_dimension_point_syntaxes():
    ms = build_measure(catalog.three_adic_measure())
    a = local_dimension(ms, "-1/8").value
    assert local_dimension(ms, "[; 1,0]").value == a
    assert local_dimension(ms, "; 1,0").value == a
    assert local_dimension(ms, expand(F(-1, 8), 3)).value == a
    assert as_point(-1, 3).period == (2,)


def test_simple_local_dimensions():
    for p in (2, 3, 5):
        ms = build_measure(catalog.haar(p))
        for x in (0, F(1, 7), -3, F(5, 11)):
            assert abs(local_dimension(ms, x).value - 1) < 1e-12
    ms = build_measure(catalog.cantor())
    for x in (0, -1, F(-3, 4), F(-1, 4)):
        if set(expand(F(x), 3).digits(20)) <= {0, 2}:
            assert abs(local_dimension(ms, x).value - math.log(2) / LOG3) < 1e-12
    with pytest.raises(NotInSupport):
        local_dimension(ms, 1)


@pytest.mark.parametrize("name", sorted(SUITE))
def test_ratio_converges_to_spectral_value(name):
    ifs = SUITE[name]
    ms = build_measure(ifs)
    d = ms.dfa
    # a few eventually periodic points in the support: short prefixes then short cycles
    checked = 0
    for pre in language_prefixes(d, 2):
        q = d.read(pre)
        for period in itertools.product(range(ifs.p), repeat=2):
            r = q
            for _ in range(len(d) + 1):
                r = d.read(period, r) if r is not None else None
            if r is None:
                continue
            x = PadicExpansion(tuple(pre), tuple(period), ifs.p)
            ld = local_dimension(ms, x)
            # triangular (non-primitive) products converge polynomially instead
            if ld.primitive:
                assert abs(ld.ratio - ld.value) < 1e-6
                checked += 1
    assert checked


def test_is_primitive():
    assert is_primitive(np.array([[1.0, 1.0], [1.0, 0.0]]))
    assert not is_primitive(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert not is_primitive(np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_positive_row_property():
    assert positive_row_check(build_measure(catalog.haar(3)))
    assert positive_row_check(build_measure(catalog.two_adic_gap()))
    # the {0,1} state's digit-0 matrix has a zero row for carry 1
    ms = build_measure(catalog.three_adic_measure())
    assert not positive_row_check(ms)
    with pytest.raises(PositiveRowViolated):
        periodic_spectrum(ms, 2)


def test_spectrum_examples():
    s = periodic_spectrum(build_measure(catalog.cantor()), 4)
    assert s.interval == pytest.approx((math.log(2) / LOG3,) * 2, abs=1e-12)
    s = periodic_spectrum(build_measure(catalog.haar(3)), 3)
    assert s.interval == pytest.approx((1, 1), abs=1e-12)
    s = periodic_spectrum(build_measure(catalog.three_adic_measure()), 2, require_positive_rows=False)
    want = 1 - math.log(2) / (2 * LOG3)
    assert any(abs(v - want) < 1e-9 for *_, v in s.samples)


def _reach_word(d, q):
    seen = {d.initial: ()}
    queue = [d.initial]
    while queue:
        s = queue.pop(0)
        for a, t in sorted(d.delta[s].items()):
            if t not in seen:
                seen[t] = seen[s] + (a,)
                queue.append(t)
    return seen[q]


POSITIVE = sorted(n for n in SUITE if positive_row_check(build_measure(SUITE[n])))


@pytest.mark.parametrize("name", POSITIVE)
def test_spectrum_samples_are_local_dimensions(name):
    ifs = SUITE[name]
    ms = build_measure(ifs)
    s = periodic_spectrum(ms, 5)
    assert all(s.lower <= v <= s.upper for *_, v in s.samples)
    for q, word, v in s.samples[:40]:
        x = PadicExpansion(_reach_word(ms.dfa, q), word, ifs.p)
        assert abs(local_dimension(ms, x).value - v) < 1e-9
    dim = hausdorff_dimension(ms.dfa)
    assert s.lower - 1e-6 <= dim <= s.upper + 1e-6
