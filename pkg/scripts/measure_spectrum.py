"""Local dimensions at periodic points and the spectrum interval [I, S]."""

import argparse
from fractions import Fraction

from padic_ifs import catalog
from padic_ifs.measure import build_measure, local_dimension, periodic_spectrum, positive_row_check
from padic_ifs.spectral import hausdorff_dimension


def systems():
    yield "cantor", catalog.cantor()
    yield "haar3", catalog.haar(3)
    for probs in catalog.MEASURE_PROBABILITIES:
        tag = ",".join(str(p) for p in probs)
        yield f"three_adic ({tag})", catalog.three_adic_measure(probs)
        yield f"two_adic_overlap ({tag})", catalog.two_adic_overlap(probs)
    yield "two_adic_gap", catalog.two_adic_gap()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-cycle", type=int, default=8)
    args = ap.parse_args()
    for name, ifs in systems():
        ms = build_measure(ifs)
        line = f"{name:34s} dim={hausdorff_dimension(ms.dfa):.6f}"
        if ifs.p == 3 and len(ifs) == 3:
            line += f" loc(-1/8)={local_dimension(ms, Fraction(-1, 8)).value:.6f}"
        if positive_row_check(ms):
            s = periodic_spectrum(ms, args.max_cycle)
            line += f" [I,S]=[{s.lower:.6f}, {s.upper:.6f}] from {len(s.samples)} cycles"
        else:
            line += " positive rows: no"
        print(line)


if __name__ == "__main__":
    main()
