"""Print the headline numbers for every catalogued system and automaton."""

import argparse
import math

from padic_ifs import catalog
from padic_ifs.automaton import classes, determinize, dfa_from_ifs, is_full_dimension, language_prefixes, minimize
from padic_ifs.decimation import coprime_cycle_test
from padic_ifs.ifs import normalize
from padic_ifs.oracle import brute_prefixes
from padic_ifs.spectral import adjacency, hausdorff_dimension, spectral_radius


def report_system(name, ifs, depth):
    d = dfa_from_ifs(ifs)
    m = minimize(d)
    rho = spectral_radius(adjacency(m))
    _, conj = normalize(ifs)
    agree = all(brute_prefixes(ifs, n) == language_prefixes(m, n) for n in range(depth + 1))
    print(
        f"{name:28s} p={ifs.p} dfa={len(d):3d} min={len(m):3d} rho={rho:.6f} "
        f"dim={hausdorff_dimension(m):.6f} full={'yes' if is_full_dimension(m) else 'no':3s} "
        f"coprime={'yes' if coprime_cycle_test(m) else 'no':3s} a={conj.shift} c={conj.scale} "
        f"oracle<= {depth}: {'ok' if agree else 'MISMATCH'}"
    )


def report_automaton(name, nfa):
    m = minimize(determinize(nfa))
    dec = classes(m)
    per_class = [math.log(spectral_radius(adjacency(m, c))) / math.log(m.p) for c in dec.essential]
    print(
        f"{name:28s} p={m.p} min={len(m):3d} dim={hausdorff_dimension(m):.6f} "
        f"essential={len(dec.essential)} class dims={[round(x, 6) for x in per_class]}"
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=6, help="oracle comparison depth")
    args = ap.parse_args()
    for name, make in catalog.SYSTEMS.items():
        report_system(name, make(), args.depth)
    report_automaton("two_essential", catalog.two_essential())
    report_automaton("shifted_cantor_graph", catalog.shifted_cantor_graph())


if __name__ == "__main__":
    main()
