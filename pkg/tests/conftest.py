import functools
import random
from fractions import Fraction

from hypothesis import settings, strategies as st

from padic_ifs import catalog
from padic_ifs.automaton import StateBudgetExceeded, determinize, to_nfa
from padic_ifs.ifs import IFS, Contraction
from padic_ifs.transducer import build

# fixed seeds so every run draws the same examples
settings.register_profile("default", derandomize=True, deadline=None)
settings.load_profile("default")

PRIMES = (2, 3, 5, 7)


def _offset(rng: random.Random, p: int) -> Fraction:
    num = rng.randint(-20, 20)
    den = rng.choice([q for q in range(1, 7) if q % p])
    return Fraction(num, den)


def random_system(rng: random.Random) -> IFS:
    p = rng.choice(PRIMES)
    n = rng.randint(1, 4)
    maps = set()
    while len(maps) < n:
        maps.add(Contraction(rng.randint(0, 1), rng.randint(1, 2), _offset(rng, p)))
    return IFS(p, tuple(sorted(maps, key=lambda f: (f.sign, f.exponent, f.offset))))


# desk-scale cap: draws whose power-set automaton is larger are redrawn
STATE_BUDGET = 5000


@functools.lru_cache(maxsize=None)
def random_suite(count: int = 25, seed: int = 20240601) -> tuple[IFS, ...]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = random_system(rng)
        try:
            determinize(to_nfa(build(s)), max_states=STATE_BUDGET)
        except StateBudgetExceeded:
            continue
        out.append(s)
    return tuple(out)


def catalog_systems() -> dict[str, IFS]:
    names = [
        "three_adic", "mixed_sign", "rational_offsets", "rational_offsets_normalized",
        "five_adic_third", "not_coprime", "decimation_example", "haar2", "haar3", "haar5",
        "cantor", "shifted_cantor",
    ]
    return {name: catalog.SYSTEMS[name]() for name in names}


def suite() -> list[tuple[str, IFS]]:
    out = list(catalog_systems().items())
    out += [(f"random{i:02d}", s) for i, s in enumerate(random_suite())]
    return out


@st.composite
def systems(draw, max_maps=3, max_k=2, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    dens = [q for q in range(1, 7) if q % p]
    contraction = st.builds(
        Contraction,
        st.integers(0, 1),
        st.integers(1, max_k),
        st.builds(Fraction, st.integers(-20, 20), st.sampled_from(dens)),
    )
    maps = draw(st.lists(contraction, min_size=1, max_size=max_maps, unique=True))
    return IFS(p, tuple(maps))


@st.composite
def measure_systems(draw, max_maps=3, primes=(2, 3, 5)):
    p = draw(st.sampled_from(primes))
    offsets = draw(st.lists(st.integers(-6, 6), min_size=1, max_size=max_maps, unique=True))
    weights = draw(st.lists(st.integers(1, 5), min_size=len(offsets), max_size=len(offsets)))
    total = sum(weights)
    probs = tuple(Fraction(w, total) for w in weights)
    return IFS(p, tuple(Contraction(0, 1, Fraction(d)) for d in offsets), probs)


def rationals(p: int, max_num: int = 200, max_den: int = 50):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den).filter(lambda q: q % p),
    )


# --- acceptance summary -------------------------------------------------------

_CRITERIA: dict[int, list[tuple[str, bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = dict(report.user_properties).get("criterion")
    if marker is None:
        return
    # xfail (strict) means a literal check failed as expected: the criterion is not met
    ok = report.outcome == "passed" and not hasattr(report, "wasxfail")
    _CRITERIA.setdefault(marker, []).append((report.nodeid.split("::")[-1], ok))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        failed = [name for name, ok in results if not ok]
        line = f"criterion {n:2d}: {'FAIL' if failed else 'PASS'}"
        if failed:
            line += f" ({len(failed)} of {len(results)} checks: {', '.join(failed)})"
        terminalreporter.write_line(line)
