"""Command-line entry point: ``dsheaf <subcommand> ...``.

Exit status is 0 on success, 1 on a domain/budget/data error and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import DomainError, DSheafError
from .field_poly import gf
from .invariants import (
    Discriminant,
    LevelIdeal,
    build_report,
    chi_bare,
    chi_level,
    classify,
    covering_degree,
    genus,
    optimality_scan,
    riemann_hurwitz_residual,
)
from .places import Place, PlaceSet, artin_legendre_constant_ext, count_places_of_degree, enumerate_places
from .report import FORMATS, bundled_reference, load_reference, comparison_table, render_reports, render_table
from .shimura_compare import RationalDiscriminant, shimura_genus, zeta_constants


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _degrees(text: str) -> list[int]:
    try:
        return [int(t) for t in _split(text)]
    except ValueError:
        raise DomainError(f"bad degree list {text!r}") from None


def _first_place_outside(F, taken) -> Place:
    d = 1
    while True:
        for x in enumerate_places(F, d, include_infinity=False):
            if x not in taken:
                return x
        d += 1


def _discriminant_and_o(args, need_o: bool = True):
    """Resolve --r-degrees/--r-polys and --o; o defaults to T, or the first place outside R."""
    F = gf(args.q)
    o = Place.parse(F, args.o) if getattr(args, "o", None) else None
    if args.r_polys:
        R = Discriminant(PlaceSet(Place.parse(F, t) for t in _split(args.r_polys)))
        if o is None and need_o:
            o = _first_place_outside(F, set(R.places))
    else:
        if o is None and need_o:
            o = Place.parse(F, "T")
        R = Discriminant.from_degrees(F, _degrees(args.r_degrees), avoid=[o] if o else [])
    return R, o


def _add_r_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r-degrees", help="comma-separated place degrees, e.g. 1,3")
    g.add_argument("--r-polys", help="comma-separated monic irreducibles, e.g. T,T+1,T+w,T+w^2")


def _parse_level(F, text: str) -> LevelIdeal:
    factors = []
    for item in _split(text):
        poly, _, exp = item.partition(":")
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise DomainError(f"bad exponent in level factor {item!r}") from None
        factors.append((Place.parse(F, poly), e))
    return LevelIdeal(tuple(factors))


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- subcommands ---------------------------------------------------------------


def cmd_places(args) -> int:
    F = gf(args.q)
    ps = enumerate_places(F, args.max_degree, include_infinity=not args.finite_only)
    rows = [{"place": str(x), "degree": x.degree, "residue_size": x.residue_size,
             "artin_legendre": artin_legendre_constant_ext(x)} for x in ps]
    counts = {d: count_places_of_degree(F, d) for d in range(1, args.max_degree + 1)}
    if args.format == "json":
        _emit(json.dumps({"q": F.q, "places": rows, "finite_counts": counts}, indent=2))
    elif args.format == "csv":
        lines = ["place,degree,residue_size,artin_legendre"]
        lines += [f"{r['place']},{r['degree']},{r['residue_size']},{r['artin_legendre']}" for r in rows]
        _emit("\n".join(lines))
    else:
        lines = ["| place | degree | residue_size | artin_legendre |", "|---|---|---|---|"]
        lines += [f"| {r['place']} | {r['degree']} | {r['residue_size']} | {r['artin_legendre']:+d} |"
                  for r in rows]
        _emit("\n".join(lines))
    return 0


def cmd_invariants(args) -> int:
    R, o = _discriminant_and_o(args)
    _emit(render_reports([build_report(R, o)], args.format) if args.format != "json"
          else json.dumps(build_report(R, o).to_dict(), indent=2))
    return 0


def cmd_genus(args) -> int:
    R, _ = _discriminant_and_o(args, need_o=False)
    _emit(str(genus(R)))
    return 0


def cmd_chi(args) -> int:
    R, _ = _discriminant_and_o(args, need_o=False)
    out = {"q": R.field.q, "r_polys": [str(x) for x in R.places], "chi0": chi_bare(R)}
    if args.level:
        I = _parse_level(R.field, args.level)
        out.update({
            "level": str(I),
            "covering_degree": covering_degree(I),
            "chi_level": chi_level(R, I),
            "riemann_hurwitz_residual": riemann_hurwitz_residual(R, I),
        })
    _emit(json.dumps(out, indent=2))
    return 0


def cmd_classify(args) -> int:
    R, _ = _discriminant_and_o(args, need_o=False)
    c = classify(R)
    _emit(json.dumps({"q": R.field.q, "r_polys": [str(x) for x in R.places], "deg_r": R.degree,
                      "genus": c.genus, "genus_zero": c.genus_zero, "hyperelliptic": c.hyperelliptic},
                     indent=2))
    return 0


def cmd_scan(args) -> int:
    F = gf(args.q)
    o = Place.parse(F, args.o)
    card = None if args.r_cardinality == "all" else int(args.r_cardinality)
    reports = optimality_scan(F, o, args.max_disc_degree, card, canonical_only=args.canonical_only)
    _emit(render_reports(reports, args.format))
    return 0


def cmd_table(args) -> int:
    F = gf(args.q)
    o = Place.parse(F, args.o)
    ref = None
    if args.reference == "bundled":
        ref = bundled_reference()
    elif args.reference:
        ref = load_reference(args.reference)
    rows = comparison_table(F, o, ref, max_genus=args.max_genus)
    _emit(render_table(rows, F.q, str(o), args.format, with_reference=ref is not None))
    return 0


def cmd_shimura(args) -> int:
    d = RationalDiscriminant.from_int(args.d)
    g = shimura_genus(d)
    if args.q is None:
        _emit(str(g))
        return 0
    zz, za = zeta_constants(gf(args.q))
    _emit(json.dumps({"d": d.d, "primes": list(d.primes), "genus": g,
                      "minus_zeta_Z(-1)": str(zz), "minus_zeta_A(-1)": str(za),
                      "leading_coefficients": {"shimura": str(zz / 2), "function_field": str(za)}},
                     indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsheaf", description="Invariants of modular curves of D-elliptic sheaves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("places", help="list places of P^1 over F_q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=1)
    p.add_argument("--finite-only", action="store_true")
    p.add_argument("--format", choices=FORMATS, default="md")
    p.set_defaults(func=cmd_places)

    p = sub.add_parser("invariants", help="all invariants of one (q, R, o)")
    p.add_argument("--q", type=int, required=True)
    _add_r_args(p)
    p.add_argument("--o", help="characteristic place (default T, or the first place outside R)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(func=cmd_invariants)

    for name, func, helptext in (("genus", cmd_genus, "genus of X^R"),
                                 ("classify", cmd_classify, "genus-zero / hyperelliptic flags")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--q", type=int, required=True)
        _add_r_args(p)
        p.set_defaults(func=func, o=None)

    p = sub.add_parser("chi", help="Euler characteristics, optionally with a level ideal")
    p.add_argument("--q", type=int, required=True)
    _add_r_args(p)
    p.add_argument("--level", help="level factors poly[:exp],..., e.g. T+1:2")
    p.set_defaults(func=cmd_chi, o=None)

    p = sub.add_parser("scan", help="supersingular/genus ratios over all R up to a degree")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--o", default="T")
    p.add_argument("--max-disc-degree", type=int, required=True)
    p.add_argument("--r-cardinality", default="2", help="even integer or 'all'")
    p.add_argument("--canonical-only", action="store_true",
                   help="one realisation per degree multiset")
    p.add_argument("--format", choices=FORMATS, default="md")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("table", help="comparison table for #R = 2")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--o", default="T")
    p.add_argument("--reference", help="reference CSV path, or 'bundled' for the shipped q=2,3 data")
    p.add_argument("--max-genus", type=int, default=50)
    p.add_argument("--format", choices=FORMATS, default="md")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("shimura", help="genus of the Shimura curve of discriminant d over Q")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, help="also show the zeta constants against F_q[T]")
    p.set_defaults(func=cmd_shimura)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "scan" and args.r_cardinality != "all":
        try:
            int(args.r_cardinality)
        except ValueError:
            parser.error(f"--r-cardinality must be an even integer or 'all', got {args.r_cardinality!r}")
    try:
        return args.func(args)
    except DSheafError as exc:
        print(f"dsheaf: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
