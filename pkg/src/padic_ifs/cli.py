"""Command-line front end: analyze | decimate | measure | normalize | oracle."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .automaton import (
    DigitDFA,
    assert_unique_essential,
    determinize,
    is_full_dimension,
    language_prefixes,
    minimize,
    nfa_from_dict,
    to_nfa,
)
from .decimation import DecimationSpec, coprime_cycle_test, decimate, decimation_dimension_profile
from .ifs import IFS, ifs_from_dict, ifs_to_dict, normalize
from .measure import as_point, build_measure, cylinder_measure, local_dimension, periodic_spectrum, positive_row_check
from .oracle import brute_prefixes
from .padic import format_rational
from .spectral import adjacency, block_spectra, dimension_from_radius, spectral_radius
from .transducer import build

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MODULE = 3
EXIT_VERIFY = 4


class ParseError(Exception):
    pass


class VerifyFailure(Exception):
    pass


def _f(x: float) -> str:
    return f"{x:.6f}"


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    return data


def _load_system(path: str) -> IFS:
    data = _read_json(path)
    try:
        return ifs_from_dict(data)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def _load_dfa(path: str) -> tuple[DigitDFA, IFS | None]:
    """A minimal DFA from either a system file or an automaton file."""
    data = _read_json(path)
    if "maps" in data:
        ifs = _load_system(path)
        return minimize(determinize(to_nfa(build(ifs)))), ifs
    try:
        nfa = nfa_from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return minimize(determinize(nfa)), None


def _emit(args, lines: list[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _spectrum_summary(d: DigitDFA) -> tuple[float, list]:
    T = adjacency(d)
    rho = spectral_radius(T)
    blocks = [([T.states[i] for i in idx], r) for idx, r in block_spectra(T) if r > 0]
    return rho, blocks


# --- commands -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    ifs = _load_system(args.system)
    t = build(ifs)
    nfa = to_nfa(t)
    dfa = determinize(nfa)
    mdfa = minimize(dfa)
    report = assert_unique_essential(mdfa, from_self_similar=True)
    rho, blocks = _spectrum_summary(mdfa)
    dim = dimension_from_radius(rho, ifs.p)
    verdict = is_full_dimension(mdfa)
    lines = [
        f"system: {ifs.describe()}",
        f"transducer: {len(t)} states, {len(t.transitions)} transitions",
        f"nfa: {len(nfa.states)} states",
        f"dfa: {len(dfa)} states",
        f"minimal dfa: {len(mdfa)} states",
        f"essential classes: {report.count}",
        f"spectral radius: {_f(rho)}",
        f"dimension: {_f(dim)}",
    ]
    for states, r in blocks:
        lines.append(f"  class {sorted(states)}: radius {_f(r)}")
    if verdict.full:
        word = ",".join(map(str, verdict.word)) or "(empty)"
        lines.append(f"full dimension: yes (state {verdict.state}, word {word})")
    else:
        lines.append("full dimension: no")
    payload = {
        "p": ifs.p,
        "transducer_states": len(t),
        "nfa_states": len(nfa.states),
        "dfa_states": len(dfa),
        "minimal_dfa_states": len(mdfa),
        "essential_classes": report.count,
        "spectral_radius": rho,
        "dimension": dim,
        "full_dimension": verdict.full,
        "witness": None if not verdict.full else {"state": verdict.state, "word": list(verdict.word)},
        "minimal_dfa": mdfa.to_dict(),
    }
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        (out / "transducer.dot").write_text(t.to_dot())
        (out / "dfa.dot").write_text(dfa.to_dot())
        (out / "minimal_dfa.dot").write_text(mdfa.to_dot("minimal_dfa"))
        lines.append(f"dot: wrote transducer.dot, dfa.dot, minimal_dfa.dot to {out}")
    failed = False
    if args.verify:
        failed = not _verify_prefixes(ifs, mdfa, args.depth, lines, payload)
    _emit(args, lines, payload)
    if failed:
        raise VerifyFailure(f"oracle disagrees with the automaton at depth <= {args.depth}")
    return EXIT_OK


def _verify_prefixes(ifs: IFS, d: DigitDFA, depth: int, lines: list, payload: dict) -> bool:
    ok = True
    for n in range(depth + 1):
        if brute_prefixes(ifs, n) != language_prefixes(d, n):
            lines.append(f"verify: mismatch at depth {n}")
            ok = False
            break
    if ok:
        lines.append(f"verify: oracle prefixes agree up to depth {depth}")
    payload["verify"] = ok
    return ok


def cmd_decimate(args) -> int:
    d, _ = _load_dfa(args.input)
    if args.profile:
        k_max, j_max = args.profile
        prof = decimation_dimension_profile(d, d.p, k_max, j_max)
        cop = coprime_cycle_test(d)
        k0 = prof.plateau_from()
        lines = [
            f"digit support: {sorted(prof.support)}",
            f"plateau log(#E)/log(p): {_f(prof.plateau)}",
            f"coprime cycles: {'yes' if cop.holds else 'no'}"
            + (f" (state {cop.state}, lengths {cop.lengths[0]} and {cop.lengths[1]})" if cop.holds else ""),
            prof.table(),
            f"plateau from k = {k0}" if k0 is not None else "plateau not reached",
        ]
        payload = {
            "support": sorted(prof.support),
            "plateau": prof.plateau,
            "coprime": cop.holds,
            "dims": {f"{k},{j}": v for (k, j), v in sorted(prof.dims.items())},
            "plateau_from": k0,
        }
    else:
        spec = DecimationSpec(args.k, args.j)
        dec = decimate(d, spec)
        dim = dimension_from_radius(spectral_radius(adjacency(dec)), d.p) if len(dec) else 0.0
        lines = [f"decimation k={spec.stride} j={spec.offset}: {len(dec)} states, dimension {_f(dim)}"]
        payload = {"k": spec.stride, "j": spec.offset, "states": len(dec), "dimension": dim}
    _emit(args, lines, payload)
    return EXIT_OK


def _parse_digits(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"bad digit list {text!r}") from None


def cmd_measure(args) -> int:
    ifs = _load_system(args.system)
    ms = build_measure(ifs)
    lines = [f"system: {ifs.describe()}", f"dfa: {len(ms.dfa)} states"]
    payload: dict = {"dfa_states": len(ms.dfa)}
    for q, a, r in ms.dfa.edges:
        lines.append(f"  {ms.dfa.label(q)} --{a}--> {ms.dfa.label(r)}  {ms.format_matrix(q, a)}")
    positive = positive_row_check(ms)
    lines.append(f"positive row property: {'yes' if positive else 'no'}")
    payload["positive_rows"] = positive
    if args.cylinder is not None:
        digits = _parse_digits(args.cylinder)
        mass = cylinder_measure(ms, digits)
        lines.append(f"cylinder [{','.join(map(str, digits))}]: {format_rational(mass)}")
        payload["cylinder"] = {"digits": digits, "mass": format_rational(mass)}
    if args.localdim is not None:
        try:
            point = as_point(args.localdim, ifs.p)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad point {args.localdim!r}: {exc}") from None
        ld = local_dimension(ms, point)
        lines.append(
            f"local dimension at {args.localdim}: {_f(ld.value)} "
            f"(cycle {ld.cycle_length}, primitive {'yes' if ld.primitive else 'no'}, "
            f"window [{_f(ld.window[0])}, {_f(ld.window[1])}], one-cycle ratio {_f(ld.ratio)})"
        )
        payload["local_dimension"] = {
            "value": ld.value,
            "cycle_length": ld.cycle_length,
            "primitive": ld.primitive,
            "window": list(ld.window),
            "ratio": ld.ratio,
        }
    if args.spectrum is not None:
        sp = periodic_spectrum(ms, args.spectrum)
        lines.append(f"periodic spectrum (cycles <= {args.spectrum}): [{_f(sp.lower)}, {_f(sp.upper)}] from {len(sp.samples)} cycles")
        payload["spectrum"] = {"lower": sp.lower, "upper": sp.upper, "samples": len(sp.samples)}
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_normalize(args) -> int:
    ifs = _load_system(args.system)
    out, conj = normalize(ifs)
    payload = {"system": ifs_to_dict(out), "a": format_rational(conj.shift), "c": format_rational(conj.scale)}
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"system: {out.describe()}")
        print(f"a = {format_rational(conj.shift)}, c = {format_rational(conj.scale)}")
        print(json.dumps(ifs_to_dict(out)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    ifs = _load_system(args.system)
    prefixes = brute_prefixes(ifs, args.depth)
    d = minimize(determinize(to_nfa(build(ifs))))
    agree = prefixes == language_prefixes(d, args.depth)
    lines = [
        f"oracle prefixes at depth {args.depth}: {len(prefixes)}",
        f"automaton agrees: {'yes' if agree else 'no'}",
    ]
    if args.list:
        lines += ["  " + "".join(map(str, w)) for w in sorted(prefixes)]
    payload = {"depth": args.depth, "count": len(prefixes), "agree": agree}
    if args.list:
        payload["prefixes"] = ["".join(map(str, w)) for w in sorted(prefixes)]
    _emit(args, lines, payload)
    if not agree:
        raise VerifyFailure("oracle and automaton prefix sets differ")
    return EXIT_OK


# --- entry point --------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-ifs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="structured output at full precision")

    p = sub.add_parser("analyze", help="automata, essential classes and dimension")
    p.add_argument("system")
    p.add_argument("--verify", action="store_true", help="check prefixes against the brute-force oracle")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--dot", metavar="DIR", help="write DOT graphs into DIR")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decimate", help="dimension of decimations psi_{j,k}")
    p.add_argument("input", help="system or automaton JSON")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--profile", type=int, nargs=2, metavar=("K_MAX", "J_MAX"))
    common(p)
    p.set_defaults(func=cmd_decimate)

    p = sub.add_parser("measure", help="cylinder masses and local dimensions")
    p.add_argument("system")
    p.add_argument("--cylinder", metavar="DIGITS", help="comma-separated digits, least significant first")
    p.add_argument("--localdim", metavar="POINT", help="'pre;period' digits or a rational (use --localdim=-1/8)")
    p.add_argument("--spectrum", type=int, metavar="L", help="max cycle length for the periodic spectrum")
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("normalize", help="conjugate to integer offsets")
    p.add_argument("system")
    common(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("oracle", help="brute-force prefix set")
    p.add_argument("system")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--list", action="store_true")
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except VerifyFailure as exc:
        print(f"verify failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, ArithmeticError, AssertionError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODULE


if __name__ == "__main__":
    sys.exit(main())
