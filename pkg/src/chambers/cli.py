"""Command line: deterministic check reports over the package's objects.

Exit codes: 0 all checks passed, 1 some check failed, 2 bad input or
usage, 3 the library caught itself being inconsistent.  --expect-fail
inverts the 0/1 pair for invocations whose interesting outcome is a
failing check.
"""

import argparse
import sys
from pathlib import Path

from . import buildings, catalog, flags, formats, shellings, walks
from .errors import ChamberError, InternalCheckError
from .reporting import Report
from .structures import (
    check_opposition,
    check_orders,
    check_projection,
    check_restriction,
    find_opposition,
    metric_structure,
    orders_to_projection,
    projection_to_restriction,
    restriction_to_orders,
)


def _common_flags(sub):
    sub.add_argument("--format", choices=("text", "tsv"), default="text",
                     help="report rendering")
    sub.add_argument("--cap", type=int, default=10_000,
                     help="pair budget above which order checks sample")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for sampled order checks")
    sub.add_argument("--samples", type=int, default=200,
                     help="sample count for sampled order checks")
    sub.add_argument("--expect-fail", action="store_true",
                     help="exit 0 when checks fail, 1 when none do")


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ChamberError(f"cannot read {path}: {exc}")


def _gate_line(rep, c):
    gr = c.check_gate_property()
    if gr.passed:
        rep.check("gate.property", True)
    else:
        v = gr.violations[0]
        rep.check("gate.property", False,
                  f"face {c.face_token(v.face)}",
                  f"chamber {c.chamber_names[v.chamber]}", v.kind,
                  *(c.chamber_names[d] for d in v.detail))
    return gr.passed


def _order_mode(args, c):
    if args.mode != "auto":
        return args.mode
    return "exhaustive" if len(c.chambers) <= 16 else "sampled"


def cmd_check_axioms(args):
    c = formats.read_complex(_read(args.complex))
    rep = Report()
    if args.structure == "metric":
        if not _gate_line(rep, c):
            return rep, None
        p, r, s = metric_structure(c)
    else:
        data = formats.read_structure(c, _read(args.structure))
        p = data.get("projection")
        r = data.get("restriction")
        s = data.get("orders")

    if p is not None:
        rep.extend(check_projection(c, p))
    if r is not None:
        rep.extend(check_restriction(c, r))
    if s is not None:
        rep.extend(check_orders(c, s, mode=_order_mode(args, c),
                                cap=args.cap, samples=args.samples,
                                seed=args.seed))

    if p is not None and r is not None:
        rep.check("convert.projection-matches-restriction",
                  projection_to_restriction(c, p) == r)
    if s is not None and p is not None:
        try:
            rep.check("convert.orders-match-projection",
                      orders_to_projection(c, s) == p)
        except ChamberError as exc:
            rep.check("convert.orders-match-projection", False, str(exc))
    if p is not None:
        try:
            back = orders_to_projection(
                c, restriction_to_orders(c, projection_to_restriction(c, p)))
            rep.check("convert.round-trip", back == p)
        except ChamberError as exc:
            rep.check("convert.round-trip", False, str(exc))

    if args.opposition:
        if r is None:
            if p is not None:
                r = projection_to_restriction(c, p)
            else:
                raise ChamberError(
                    "--opposition needs a projection or restriction")
        try:
            opp = find_opposition(c, r)
        except ChamberError as exc:
            rep.check("opposition.exists", False, str(exc))
        else:
            rep.check("opposition.exists", True)
            if p is not None and s is not None:
                rep.extend(check_opposition(c, p, r, s, opp))
    return rep, None


def cmd_shell(args):
    c = formats.read_complex(_read(args.complex))
    if args.order:
        order = formats.read_shelling(c, _read(args.order))
    else:
        order = list(range(len(c.chambers)))
    rep = Report()
    try:
        cert = shellings.verify_shelling(c, order)
    except ChamberError as exc:
        rep.check("shelling.valid", False, str(exc))
        return rep, None
    rep.check("shelling.valid", True)
    n = shellings.sphere_count(c, cert)
    rep.value("spheres", n, "spheres", n)
    if args.reverse:
        rep.extend(shellings.reverse_shelling_check(c, order))
    raw = formats.write_certificate(c, cert) if args.certificate else None
    return rep, raw


def cmd_hvector(args):
    c = formats.read_complex(_read(args.complex))
    rep = Report()
    labelled = c.types is not None and not args.ranks
    if labelled:
        if args.vector == "beta":
            base = c.parse_chamber(args.base) if args.base else 0
            column = {d: c.descent_face(base, d)
                      for d in range(len(c.chambers))}
            vec = flags.beta_vector(c, column)
        else:
            f, h = flags.flag_vectors(c)
            vec = f if args.vector == "f" else h
        for j in sorted(vec):
            token = c.type_token(j) if j else ""
            rep.value(f"{args.vector}[{{{token}}}]", vec[j],
                      args.vector, token or "-", vec[j])
        if args.ds:
            rep.extend(flags.ds_report(c, vec))
    else:
        if args.vector == "beta":
            base = c.parse_chamber(args.base) if args.base else 0
            column = {d: c.descent_face(base, d)
                      for d in range(len(c.chambers))}
            vec = flags.beta_ranks(c, column)
        else:
            f, h = flags.rank_vectors(c)
            vec = f if args.vector == "f" else h
        for j, v in enumerate(vec):
            rep.value(f"{args.vector}[{j}]", v, args.vector, j, v)
        if args.ds:
            rep.extend(flags.ds_report_ranks(vec))
    return rep, None


def _type_mask(c, token):
    if c.types is None:
        raise ChamberError("the complex has no vertex types")
    mask = 0
    for lab in token.split(","):
        if lab not in c.labels:
            raise ChamberError(f"unknown type label {lab!r}")
        mask |= 1 << c.labels.index(lab)
    return mask


def cmd_walk(args):
    rep = Report()
    if args.lrb:
        band = formats.read_lrb(_read(args.target))

        def elem(tok):
            if tok not in band.name_index:
                raise ChamberError(f"unknown element {tok!r}")
            return band.name_index[tok]

        if args.weights:
            weights = formats.read_weights(_read(args.weights), elem)
        elif args.uniform_rank is not None:
            weights = walks.uniform_rank_weights(band, args.uniform_rank)
        else:
            from fractions import Fraction
            weights = {x: Fraction(1, band.n) for x in range(band.n)}
        result = walks.walk_band(band, weights)
    else:
        c = formats.read_complex(_read(args.target))
        if not _gate_line(rep, c):
            return rep, None
        p, _, _ = metric_structure(c)
        if args.weights:
            weights = formats.read_weights(_read(args.weights), c.parse_face)
        elif args.uniform_type is not None:
            weights = walks.uniform_type_weights(
                c, _type_mask(c, args.uniform_type))
        else:
            from fractions import Fraction
            weights = {f: Fraction(1, len(c.faces)) for f in c.faces}
        result = walks.walk_complex(c, p, weights)
    for name, prob in zip(result.states, result.stationary):
        rep.value(f"pi {name}", prob, "pi", name, prob)
    return rep, None


_COXETER = {"A": lambda rank: ("A", rank + 1),
            "B": lambda rank: ("B", rank),
            "D": lambda rank: ("D", rank)}


def _arrangement_of(args):
    from .arrangements import (boolean_arrangement, braid_arrangement,
                               coxeter_arrangement, generic_arrangement)
    if args.coxeter:
        tok = args.coxeter.strip().upper()
        fam, digits = tok[:1], tok[1:]
        if fam not in _COXETER or not digits.isdigit():
            raise ChamberError(f"cannot parse Coxeter type {args.coxeter!r}")
        family, n = _COXETER[fam](int(digits))
        return coxeter_arrangement(family, n)
    if args.braid is not None:
        return braid_arrangement(args.braid)
    if args.boolean is not None:
        return boolean_arrangement(args.boolean)
    if args.generic:
        return generic_arrangement()
    if args.file:
        return formats.read_arrangement(_read(args.file))
    entry = catalog.get(args.catalog)
    if entry.arrangement is None:
        raise ChamberError(f"catalog entry {args.catalog} carries no "
                           "arrangement")
    return entry.arrangement


def cmd_arrangement(args):
    arr = _arrangement_of(args)
    rep = Report()
    which = args.check
    if which in ("faces", "all"):
        rep.extend(arr.check_faces())
    if which in ("commutativity", "all"):
        rep.extend(walks.check_commutativity(arr.lrb()))
    if which in ("uniformity", "all"):
        rep.extend(walks.check_uniformity(arr.lrb()))
    if which == "rank3" or (which == "all" and arr.rank == 3):
        rep.extend(walks.rank3_harness(arr))
    return rep, None


def cmd_building(args):
    b = buildings.build_building(args.n, args.q)
    rep = Report()
    which = args.check
    if which in ("counts", "all"):
        rep.extend(buildings.check_counts(b))
    if which in ("gate", "all"):
        rep.extend(buildings.check_gate(b))
    if which in ("retraction", "all"):
        rep.extend(buildings.check_retraction(b))
    if which in ("duality", "hq", "all"):
        polys, hq_rep = buildings.hq_polynomials(b)
        for J in sorted(polys, key=lambda t: (len(t), t)):
            label = "{" + ",".join(str(j) for j in J) + "}"
            rep.value(f"h[{label}]", polys[J].render(),
                      "h", label, polys[J].render())
        rep.extend(hq_rep)
        if which in ("duality", "all"):
            rep.extend(buildings.check_duality_lemma(b))
    return rep, None


def cmd_catalog(args):
    if args.dump:
        if not args.name:
            raise ChamberError("--dump needs --name")
        entry = catalog.get(args.name, fresh=args.fresh)
        if args.dump == "complex":
            if entry.complex is None:
                raise ChamberError(f"{entry.name} carries no complex")
            return None, formats.write_complex(entry.complex)
        if args.dump == "structure":
            if entry.structure is None:
                raise ChamberError(f"{entry.name} carries no structure")
            p, r, s = entry.structure
            return None, formats.write_structure(
                entry.complex, projection=p, restriction=r, orders=s)
        if args.dump == "arrangement":
            if entry.arrangement is None:
                raise ChamberError(f"{entry.name} carries no arrangement")
            return None, formats.write_arrangement(entry.arrangement)
        if entry.band is None:
            raise ChamberError(f"{entry.name} carries no band")
        return None, formats.write_lrb(entry.band)

    if args.check or args.name:
        rep = Report()
        names = [args.name] if args.name else list(catalog.names())
        for nm in names:
            entry = catalog.get(nm, fresh=args.fresh)
            rep.value("entry", nm, "entry", nm)
            rep.extend(catalog.check_entry(entry, cap=args.cap,
                                           samples=args.samples,
                                           seed=args.seed))
        return rep, None

    sep = "\t" if args.format == "tsv" else "  "
    width = 0 if args.format == "tsv" else max(map(len, catalog.names()))
    out = [f"{nm:{width}s}{sep}{summary}"
           for nm, summary in catalog.summaries()]
    return None, "\n".join(out) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chambers",
        description="exact checks for chamber complexes, arrangements, "
                    "bands, walks, and flag buildings")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check-axioms",
                          help="verify axiom structures over a complex")
    sub.add_argument("complex", help="complex file")
    sub.add_argument("--structure", default="metric",
                     help="'metric' or a structure file")
    sub.add_argument("--mode", choices=("auto", "exhaustive", "sampled"),
                     default="auto")
    sub.add_argument("--opposition", action="store_true",
                     help="also locate and verify the opposition map")
    _common_flags(sub)
    sub.set_defaults(func=cmd_check_axioms)

    sub = subs.add_parser("shell", help="verify a shelling order")
    sub.add_argument("complex", help="complex file")
    sub.add_argument("--order", help="shelling file, one chamber per line "
                     "(default: declaration order)")
    sub.add_argument("--reverse", action="store_true",
                     help="also verify the reversed order on a thin complex")
    sub.add_argument("--certificate", action="store_true",
                     help="print the restriction certificate")
    _common_flags(sub)
    sub.set_defaults(func=cmd_shell)

    sub = subs.add_parser("hvector", help="flag vectors of a complex")
    sub.add_argument("complex", help="complex file")
    sub.add_argument("--vector", choices=("h", "f", "beta"), default="h")
    sub.add_argument("--base", help="base chamber for beta")
    sub.add_argument("--ranks", action="store_true",
                     help="use rank counts even on a typed complex")
    sub.add_argument("--ds", action="store_true",
                     help="append the complementary-pair report")
    _common_flags(sub)
    sub.set_defaults(func=cmd_hvector)

    sub = subs.add_parser("walk", help="exact stationary distribution of "
                          "a face walk")
    sub.add_argument("target", help="complex file, or band file with --lrb")
    sub.add_argument("--lrb", action="store_true",
                     help="treat the target as a band table")
    sub.add_argument("--weights", help="weights file")
    sub.add_argument("--uniform-type",
                     help="uniform weights on one type class (complex)")
    sub.add_argument("--uniform-rank", type=int,
                     help="uniform weights on one rank class (band)")
    _common_flags(sub)
    sub.set_defaults(func=cmd_walk)

    sub = subs.add_parser("arrangement", help="hyperplane arrangement checks")
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--coxeter", help="reflection arrangement, e.g. A3, "
                     "B3, D4")
    src.add_argument("--braid", type=int, help="essential braid arrangement "
                     "on N letters")
    src.add_argument("--boolean", type=int, help="coordinate arrangement in "
                     "rank N")
    src.add_argument("--generic", action="store_true",
                     help="four generic planes in rank 3")
    src.add_argument("--file", help="arrangement file")
    src.add_argument("--catalog", help="catalog entry name")
    sub.add_argument("--check",
                     choices=("faces", "commutativity", "uniformity",
                              "rank3", "all"),
                     default="faces")
    _common_flags(sub)
    sub.set_defaults(func=cmd_arrangement)

    sub = subs.add_parser("building", help="flag complex of F_q^n")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--q", type=int, required=True)
    sub.add_argument("--check",
                     choices=("counts", "gate", "retraction", "hq",
                              "duality", "all"),
                     default="counts")
    _common_flags(sub)
    sub.set_defaults(func=cmd_building)

    sub = subs.add_parser("catalog", help="named examples")
    sub.add_argument("--name", help="entry name")
    sub.add_argument("--check", action="store_true",
                     help="run the bundled checkers (all entries when no "
                     "--name is given)")
    sub.add_argument("--dump",
                     choices=("complex", "structure", "arrangement", "lrb"),
                     help="write the entry in its file format")
    sub.add_argument("--fresh", action="store_true",
                     help="rebuild instead of using the cache")
    sub.add_argument("--list", action="store_true",
                     help="list entries (the default)")
    _common_flags(sub)
    sub.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, raw = args.func(args)
    except InternalCheckError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 3
    except ChamberError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if rep is not None and rep.lines:
        print(rep.render(args.format))
    if raw is not None:
        sys.stdout.write(raw)
    if rep is None:
        return 0
    failed = bool(rep.failures)
    if args.expect_fail:
        return 0 if failed else 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
