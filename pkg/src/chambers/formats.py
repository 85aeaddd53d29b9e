"""Flat text formats: one declaration per line, `#` to end of line is a
comment, duplicate declarations are errors.

Readers raise FormatError carrying the offending line number; writers
produce files the readers round-trip exactly.
"""

from fractions import Fraction

from .arrangements import Arrangement, _primitive
from .complexes import Complex
from .errors import ChamberError, FormatError
from .lrb import LRB
from .orders import PartialOrder
from .structures import OrderFamily, ProjectionTable, RestrictionFamily


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _chamber(c, token, lineno):
    try:
        return c.parse_chamber(token)
    except ChamberError as exc:
        raise FormatError(str(exc), lineno)


def _face(c, token, lineno):
    try:
        return c.parse_face(token)
    except ChamberError as exc:
        raise FormatError(str(exc), lineno)


# ---- complexes ----------------------------------------------------------

def read_complex(text):
    """`vertex <name> [<type>]` and `chamber <name> <name> ...` lines."""
    vertex_order = []
    types = {}
    typed = set()
    chambers = []
    seen_chambers = {}
    for lineno, toks in _lines(text):
        kind, args = toks[0], toks[1:]
        if kind == "vertex":
            if not 1 <= len(args) <= 2:
                raise FormatError("vertex takes a name and an optional type",
                                  lineno)
            name = args[0]
            if name in types or (name in vertex_order):
                raise FormatError(f"vertex {name} declared twice", lineno)
            vertex_order.append(name)
            if len(args) == 2:
                types[name] = args[1]
                typed.add(name)
        elif kind == "chamber":
            if not args:
                raise FormatError("chamber needs at least one vertex", lineno)
            key = frozenset(args)
            if len(key) != len(args):
                raise FormatError("chamber repeats a vertex", lineno)
            if key in seen_chambers:
                raise FormatError(
                    f"chamber {{{','.join(sorted(args))}}} declared twice "
                    f"(first on line {seen_chambers[key]})", lineno)
            seen_chambers[key] = lineno
            chambers.append(tuple(args))
        else:
            raise FormatError(f"unknown declaration {kind!r}", lineno)
    if not chambers:
        raise FormatError("no chamber declarations", lineno=None)
    used = {v for ch in chambers for v in ch}
    unused = [v for v in vertex_order if v not in used]
    if unused:
        raise FormatError(f"vertex {unused[0]} lies in no chamber")
    if typed and not used <= typed:
        missing = sorted(used - typed)
        raise FormatError(f"vertex {missing[0]} has no declared type")
    try:
        return Complex(chambers, types=types if typed else None)
    except ChamberError as exc:
        raise FormatError(str(exc))


def write_complex(c):
    out = []
    for i, v in enumerate(c.vertex_names):
        if c.types is None:
            out.append(f"vertex {v}")
        else:
            out.append(f"vertex {v} {c.types[i]}")
    for m in c.chambers:
        verts = sorted(c.vertex_names[b] for b in _bits(m))
        out.append("chamber " + " ".join(verts))
    return "\n".join(out) + "\n"


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---- axiom structures -----------------------------------------------------

def read_structure(c, text):
    """Structure lines over an existing complex.

    `proj <face|-> <chamber> -> <chamber>`
    `restr <C> <D> -> <face|->`
    `order <C>: <E> < <D>`

    Returns a dict holding whichever of "projection", "restriction",
    "orders" the file declares; proj and restr tables must be complete.
    """
    nch = len(c.chambers)
    proj = {}
    restr = {}
    order_pairs = {}
    have_orders = False
    for lineno, toks in _lines(text):
        kind = toks[0]
        if kind == "proj":
            if len(toks) != 5 or toks[3] != "->":
                raise FormatError("proj <face|-> <chamber> -> <chamber>",
                                  lineno)
            f = _face(c, toks[1], lineno)
            ci = _chamber(c, toks[2], lineno)
            d = _chamber(c, toks[4], lineno)
            if (f, ci) in proj:
                raise FormatError(
                    f"projection of {toks[2]} from {toks[1]} declared twice",
                    lineno)
            proj[(f, ci)] = d
        elif kind == "restr":
            if len(toks) != 5 or toks[3] != "->":
                raise FormatError("restr <C> <D> -> <face|->", lineno)
            ci = _chamber(c, toks[1], lineno)
            d = _chamber(c, toks[2], lineno)
            f = _face(c, toks[4], lineno)
            if (ci, d) in restr:
                raise FormatError(
                    f"restriction of {toks[2]} at {toks[1]} declared twice",
                    lineno)
            restr[(ci, d)] = f
        elif kind == "order":
            if len(toks) != 5 or not toks[1].endswith(":") or toks[3] != "<":
                raise FormatError("order <C>: <E> < <D>", lineno)
            ci = _chamber(c, toks[1][:-1], lineno)
            e = _chamber(c, toks[2], lineno)
            d = _chamber(c, toks[4], lineno)
            order_pairs.setdefault(ci, []).append((e, d))
            have_orders = True
        else:
            raise FormatError(f"unknown declaration {kind!r}", lineno)

    out = {}
    if proj:
        want = len(c.faces) * nch
        if len(proj) != want:
            raise FormatError(
                f"projection table has {len(proj)} entries, needs {want}")
        out["projection"] = ProjectionTable(c, proj)
    if restr:
        want = nch * nch
        if len(restr) != want:
            raise FormatError(
                f"restriction family has {len(restr)} entries, needs {want}")
        out["restriction"] = RestrictionFamily(c, restr)
    if have_orders:
        orders = []
        for ci in range(nch):
            try:
                orders.append(PartialOrder.from_pairs(
                    nch, order_pairs.get(ci, []),
                    what=f"order at {c.chamber_names[ci]}"))
            except ChamberError as exc:
                raise FormatError(str(exc))
        out["orders"] = OrderFamily(c, orders)
    if not out:
        raise FormatError("no structure declarations")
    return out


def write_structure(c, projection=None, restriction=None, orders=None):
    """Chambers are written as their vertex-set tokens, not their display
    names, so a dump stays readable against a complex re-read from its
    own file (which only keeps default names)."""
    out = []

    def name(ci):
        return c.face_token(c.chambers[ci])

    if projection is not None:
        for f in c.faces:
            for ci in range(len(c.chambers)):
                out.append(f"proj {c.face_token(f)} {name(ci)} -> "
                           f"{name(projection.table[(f, ci)])}")
    if restriction is not None:
        for ci in range(len(c.chambers)):
            for d in range(len(c.chambers)):
                out.append(f"restr {name(ci)} {name(d)} -> "
                           f"{c.face_token(restriction.table[(ci, d)])}")
    if orders is not None:
        for ci in range(len(c.chambers)):
            for a, b in orders.order(ci).covers():
                out.append(f"order {name(ci)}: {name(a)} < {name(b)}")
    if not out:
        raise FormatError("nothing to write")
    return "\n".join(out) + "\n"


# ---- shelling orders and certificates --------------------------------------

def read_shelling(c, text):
    """One chamber name per line, in shelling order."""
    order = []
    seen = set()
    for lineno, toks in _lines(text):
        if len(toks) != 1:
            raise FormatError("one chamber per line", lineno)
        ci = _chamber(c, toks[0], lineno)
        if ci in seen:
            raise FormatError(f"chamber {toks[0]} listed twice", lineno)
        seen.add(ci)
        order.append(ci)
    if not order:
        raise FormatError("empty shelling order")
    return order


def write_shelling(c, order):
    return "\n".join(c.face_token(c.chambers[ci]) for ci in order) + "\n"


def write_certificate(c, cert):
    """`R <chamber> -> <face|->` lines, in shelling order."""
    out = []
    for ci, f in zip(cert.order, cert.restriction):
        out.append(f"R {c.face_token(c.chambers[ci])} -> {c.face_token(f)}")
    return "\n".join(out) + "\n"


def read_certificate(c, text):
    """Chamber order and restriction faces from a certificate dump."""
    order = []
    faces = []
    seen = set()
    for lineno, toks in _lines(text):
        if len(toks) != 4 or toks[0] != "R" or toks[2] != "->":
            raise FormatError("R <chamber> -> <face|->", lineno)
        ci = _chamber(c, toks[1], lineno)
        if ci in seen:
            raise FormatError(f"chamber {toks[1]} listed twice", lineno)
        seen.add(ci)
        order.append(ci)
        faces.append(_face(c, toks[3], lineno))
    if not order:
        raise FormatError("empty certificate")
    return order, faces


# ---- arrangements -----------------------------------------------------------

def read_arrangement(text):
    """`hyperplane a1 a2 ... ad` integer rows, all the same length."""
    normals = []
    seen = {}
    dim = None
    for lineno, toks in _lines(text):
        if toks[0] != "hyperplane":
            raise FormatError(f"unknown declaration {toks[0]!r}", lineno)
        try:
            vec = tuple(int(v) for v in toks[1:])
        except ValueError:
            raise FormatError("hyperplane coordinates must be integers",
                              lineno)
        if not vec:
            raise FormatError("hyperplane needs coordinates", lineno)
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise FormatError(
                f"expected {dim} coordinates, got {len(vec)}", lineno)
        if not any(vec):
            raise FormatError("zero normal", lineno)
        rep, _ = _primitive(vec)
        if rep in seen:
            raise FormatError(
                f"hyperplane parallel to the one on line {seen[rep]}", lineno)
        seen[rep] = lineno
        normals.append(vec)
    if not normals:
        raise FormatError("no hyperplane declarations")
    try:
        return Arrangement(normals)
    except ChamberError as exc:
        raise FormatError(str(exc))


def write_arrangement(arr):
    return "\n".join(
        "hyperplane " + " ".join(str(v) for v in a)
        for a in arr.normals) + "\n"


# ---- bands -------------------------------------------------------------------

def read_lrb(text):
    """`elem <name>` lines followed by a complete `prod <x> <y> -> <z>`
    table."""
    names = []
    index = {}
    prods = {}
    for lineno, toks in _lines(text):
        kind = toks[0]
        if kind == "elem":
            if len(toks) != 2:
                raise FormatError("elem <name>", lineno)
            if toks[1] in index:
                raise FormatError(f"element {toks[1]} declared twice", lineno)
            index[toks[1]] = len(names)
            names.append(toks[1])
        elif kind == "prod":
            if len(toks) != 5 or toks[3] != "->":
                raise FormatError("prod <x> <y> -> <z>", lineno)
            try:
                x, y, z = (index[toks[i]] for i in (1, 2, 4))
            except KeyError as exc:
                raise FormatError(f"unknown element {exc.args[0]}", lineno)
            if (x, y) in prods:
                raise FormatError(
                    f"product {toks[1]} * {toks[2]} declared twice", lineno)
            prods[(x, y)] = z
        else:
            raise FormatError(f"unknown declaration {kind!r}", lineno)
    if not names:
        raise FormatError("no element declarations")
    try:
        return LRB.from_table(names, prods)
    except ChamberError as exc:
        raise FormatError(str(exc))


def write_lrb(band):
    out = [f"elem {nm}" for nm in band.names]
    for x in range(band.n):
        for y in range(band.n):
            out.append(f"prod {band.names[x]} {band.names[y]} -> "
                       f"{band.names[band.prod(x, y)]}")
    return "\n".join(out) + "\n"


# ---- weights -------------------------------------------------------------------

def read_weights(text, parse_token):
    """`w <token> <num>/<den>` lines; parse_token maps the token to a key."""
    weights = {}
    for lineno, toks in _lines(text):
        if len(toks) != 3 or toks[0] != "w":
            raise FormatError("w <face|-> <num>/<den>", lineno)
        try:
            key = parse_token(toks[1])
        except ChamberError as exc:
            raise FormatError(str(exc), lineno)
        if key in weights:
            raise FormatError(f"weight for {toks[1]} declared twice", lineno)
        try:
            weights[key] = Fraction(toks[2])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad weight {toks[2]!r}", lineno)
    if not weights:
        raise FormatError("no weight declarations")
    return weights


def write_weights(items, token_of):
    return "\n".join(f"w {token_of(k)} {Fraction(w)}" for k, w in items) + "\n"
