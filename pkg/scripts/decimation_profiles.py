"""Decimation dimension tables for the catalogued systems."""

import argparse

from padic_ifs import catalog
from padic_ifs.automaton import determinize, dfa_from_ifs, minimize
from padic_ifs.decimation import coprime_cycle_test, decimation_dimension_profile


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", help="catalog names (default: all)")
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--j-max", type=int, default=3)
    args = ap.parse_args()
    sources = {n: (lambda f=f: minimize(dfa_from_ifs(f()))) for n, f in catalog.SYSTEMS.items()}
    sources["shifted_cantor_graph"] = lambda: minimize(determinize(catalog.shifted_cantor_graph()))
    for name in args.names or sorted(sources):
        d = sources[name]()
        prof = decimation_dimension_profile(d, k_max=args.k_max, j_max=args.j_max)
        k0 = prof.plateau_from()
        print(f"== {name}: support {sorted(prof.support)}, plateau {prof.plateau:.6f}, "
              f"coprime {'yes' if coprime_cycle_test(d) else 'no'}, plateau from k = {k0}")
        print(prof.table())
        print()


if __name__ == "__main__":
    main()
