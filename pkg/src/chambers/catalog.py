"""Named worked examples, each bundled with the structures it carries.

Polygons come with the clockwise structure, a deliberately non-metric
family; the hexagon additionally appears as a metric entry with an
opposition map.  The arrangement-backed entries range from the octants
to the rank-4 reflection arrangements, with two negative examples: the
generic four-plane arrangement (non-simplicial) and the wall slice of
the rank-5 type-D arrangement (simplicial but with non-commuting rank
sums).  The Petersen pairs complex is the stock counterexample to the
gate property, and the flag complexes over small fields cover the
non-thin territory.

Every generator is deterministic; `get` caches, `get(name, fresh=True)`
rebuilds from scratch.
"""

from itertools import combinations

from . import buildings as _buildings
from .arrangements import (
    Arrangement,
    _primitive,
    boolean_arrangement,
    braid_arrangement,
    coxeter_arrangement,
    generic_arrangement,
)
from .complexes import Complex
from .errors import BadN, OracleMismatch, UnknownEntry
from .lrb import free_lrb
from .orders import PartialOrder
from .reporting import Report
from .structures import (
    MetricStructure,
    OrderFamily,
    check_opposition,
    check_orders,
    check_projection,
    check_restriction,
    find_opposition,
    metric_structure,
    orders_to_projection,
    projection_to_restriction,
)


class CatalogEntry:
    """A named example: a complex and/or arrangement/band/building, with
    optional bundled axiom structures."""

    def __init__(self, name, summary, complex=None, structure=None,
                 opposition=None, arrangement=None, band=None, building=None,
                 extra=None):
        self.name = name
        self.summary = summary
        self.complex = complex
        self.structure = structure
        self.opposition = opposition
        self.arrangement = arrangement
        self.band = band
        self.building = building
        self.extra = extra or {}

    def __repr__(self):
        parts = [p for p, v in (
            ("complex", self.complex), ("structure", self.structure),
            ("arrangement", self.arrangement), ("band", self.band),
            ("building", self.building)) if v is not None]
        return f"CatalogEntry({self.name}: {', '.join(parts)})"


# ---- polygons ---------------------------------------------------------------

def gen_ngon(n):
    """The n-cycle with the clockwise structure: from base e_i the chambers
    are totally ordered e_i < e_{i+1} < ... all the way around.

    Projection onto a face picks the first chamber of its residue in
    clockwise order, which for a vertex behind the base is not the
    nearest chamber of the residue.  Even n also gets the two-colouring
    s/t as vertex types.
    """
    if n < 3:
        raise BadN(f"an n-gon needs n >= 3, got {n}")
    chambers = [(f"v{i}", f"v{(i + 1) % n}") for i in range(n)]
    names = [f"e{i}" for i in range(n)]
    types = None
    if n % 2 == 0:
        types = {f"v{i}": ("s" if i % 2 == 0 else "t") for i in range(n)}
    c = Complex(chambers, types=types, chamber_names=names)

    orders = []
    for base in range(n):
        seq = [(base + k) % n for k in range(n)]
        orders.append(PartialOrder.from_pairs(
            n, list(zip(seq, seq[1:])), what=f"clockwise from e{base}"))
    s = OrderFamily(c, orders)
    p = orders_to_projection(c, s)
    r = projection_to_restriction(c, p)
    return CatalogEntry(
        f"ngon-{n}", f"{n}-gon with the clockwise structure",
        complex=c, structure=MetricStructure(p, r, s))


def gen_hexagon():
    """The hexagon as a metric entry: gate projection, descent restriction,
    geodesic orders, and the antipodal opposition map."""
    base = gen_ngon(6)
    c = base.complex
    st = metric_structure(c)
    opp = find_opposition(c, st.restriction)
    return CatalogEntry(
        "hexagon", "hexagon with the metric structure and opposition",
        complex=c, structure=st, opposition=opp)


def ngon_nonmetric_witness(entry):
    """A (face, chamber, projection, nearest) tuple where the clockwise
    projection is not the unique nearest chamber of the residue, or None
    when it always is."""
    c = entry.complex
    p = entry.structure.projection
    for ci in range(len(c.chambers)):
        dist = c.distances_from(ci)
        for f in c.faces:
            res = c.residue(f)
            best = min(dist[e] for e in res)
            nearest = [e for e in res if dist[e] == best]
            got = p.project(f, ci)
            if dist[got] != best or len(nearest) > 1:
                return (f, ci, got, tuple(nearest))
    return None


# ---- Petersen pairs complex -------------------------------------------------

def gen_petersen():
    """Disjoint pairs of 2-subsets of a 5-set: 10 vertices, 15 chambers,
    10 hexagonal apartments, every chamber in exactly 4 of them."""
    ground = (1, 2, 3, 4, 5)
    vname = {}
    for a, b in combinations(ground, 2):
        vname[frozenset((a, b))] = f"p{a}{b}"
    pairs = sorted(vname, key=sorted)
    chambers = [(vname[u], vname[w]) for u, w in combinations(pairs, 2)
                if not (u & w)]
    c = Complex(chambers)

    apartments = []
    labels = []
    for i, j in combinations(ground, 2):
        rest = [x for x in ground if x not in (i, j)]
        members = set()
        for x in rest:
            for y in rest:
                if x != y:
                    m = c.face_from_names(
                        [vname[frozenset((i, x))], vname[frozenset((j, y))]])
                    members.add(c.chamber_index[m])
        apartments.append(tuple(sorted(members)))
        labels.append(f"a{i}{j}")

    if len(c.vertex_names) != 10 or len(c.chambers) != 15 \
            or len(apartments) != 10:
        raise OracleMismatch("pairs-complex counts are off")
    return CatalogEntry(
        "petersen", "Petersen pairs complex, the gate-property failure",
        complex=c,
        extra={"apartments": tuple(apartments),
               "apartment_labels": tuple(labels)})


def check_petersen(entry):
    """Counts, hexagonal apartments, and the tie structure behind the gate
    failure: every tied (vertex, chamber) pair has exactly two nearest
    chambers, exactly two apartments through it, one nearest in each."""
    rep = Report()
    c = entry.complex
    apartments = entry.extra["apartments"]
    nch = len(c.chambers)

    member_counts = [sum(1 for a in apartments if ci in a)
                     for ci in range(nch)]
    rep.check("petersen.counts",
              len(c.vertex_names) == 10 and nch == 15
              and len(apartments) == 10 and set(member_counts) == {4},
              "10 vertices, 15 chambers, 10 apartments,",
              "every chamber in exactly 4")

    bad = None
    for a in apartments:
        inside = set(a)
        degs = [sum(1 for e in c.adjacency[x] if e in inside) for x in a]
        seen = {a[0]}
        queue = [a[0]]
        while queue:
            x = queue.pop()
            for e in c.adjacency[x]:
                if e in inside and e not in seen:
                    seen.add(e)
                    queue.append(e)
        if len(a) != 6 or degs != [2] * 6 or len(seen) != 6:
            bad = a
            break
    rep.check("petersen.apartment-hexagons", bad is None,
              "all 10 apartments are 6-cycles" if bad is None
              else f"{bad} is not a 6-cycle")

    gr = c.check_gate_property()
    tie = next((v for v in gr.violations if v.kind == "tie"), None)
    rep.check("petersen.gate-fails",
              not gr.passed and tie is not None and len(tie.detail) == 2,
              f"face {c.face_token(tie.face)} from "
              f"{c.chamber_names[tie.chamber]} ties between "
              f"{c.chamber_names[tie.detail[0]]} and "
              f"{c.chamber_names[tie.detail[1]]}" if tie else "no tie found")

    bad = None
    ties = 0
    for ci in range(nch):
        dist = c.distances_from(ci)
        for f in c.faces:
            if c.face_rank[f] != 1:
                continue
            res = c.residue(f)
            best = min(dist[e] for e in res)
            nearest = [e for e in res if dist[e] == best]
            if len(nearest) == 1:
                continue
            ties += 1
            through = [a for a in apartments
                       if ci in a
                       and any(c.chambers[e] & f == f for e in a)]
            hits = [sum(1 for e in nearest if e in a) for a in through]
            if len(nearest) != 2 or len(through) != 2 or hits != [1, 1]:
                bad = (f, ci, nearest, through)
                break
        if bad:
            break
    rep.check("petersen.tie-apartments", bad is None and ties > 0,
              f"{ties} tied vertex-chamber pairs, each with 2 nearest",
              "chambers split across its 2 apartments" if bad is None
              else f"witness {bad}")
    return rep


# ---- octants ----------------------------------------------------------------

def gen_octants():
    """The octant complex on named coordinate rays, with metric structures.

    Built by hand from sign words; the bundled arrangement is the
    coordinate one, and check_entry confirms the two describe the same
    complex.
    """
    axes = ("x", "y", "z")
    chambers = []
    names = []
    for signs in [(sx, sy, sz) for sx in "+-" for sy in "+-" for sz in "+-"]:
        chambers.append(tuple(f"{ax}{sg}" for ax, sg in zip(axes, signs)))
        names.append("".join(signs))
    types = {f"{ax}{sg}": ax for ax in axes for sg in "+-"}
    c = Complex(chambers, types=types, chamber_names=names)
    st = metric_structure(c)
    opp = find_opposition(c, st.restriction)
    return CatalogEntry(
        "octants", "coordinate octants with metric structure and opposition",
        complex=c, structure=st, opposition=opp,
        arrangement=boolean_arrangement(3))


def _check_octants_match(entry):
    """The hand-built octant complex and the coordinate arrangement's
    chamber complex agree: same face counts by rank, same adjacency
    degrees, same distance profile."""
    rep = Report()
    c = entry.complex
    d = entry.arrangement.to_complex()

    def profile(cx):
        ranks = sorted(cx.face_rank.values())
        degs = sorted(len(a) for a in cx.adjacency)
        dists = sorted(tuple(sorted(cx.distances_from(ci)))
                       for ci in range(len(cx.chambers)))
        return (ranks, degs, dists)

    rep.check("octants.arrangement-match", profile(c) == profile(d),
              "hand-built complex matches the coordinate arrangement")
    return rep


# ---- arrangement-backed entries ---------------------------------------------

def _arrangement_entry(name, summary, arr, with_complex=True):
    if not with_complex:
        return CatalogEntry(name, summary, arrangement=arr)
    c = arr.to_complex()
    st = metric_structure(c)
    opp = find_opposition(c, st.restriction)
    return CatalogEntry(name, summary, complex=c, structure=st,
                        opposition=opp, arrangement=arr)


def gen_braid_a2():
    return _arrangement_entry(
        "braid-a2", "essential braid arrangement on three letters, a hexagon",
        braid_arrangement(3))


def gen_coxeter_a3():
    return _arrangement_entry(
        "coxeter-a3", "rank-3 braid reflection arrangement, 24 chambers",
        coxeter_arrangement("A", 4))


def gen_coxeter_b3():
    return _arrangement_entry(
        "coxeter-b3",
        "rank-3 hyperoctahedral reflection arrangement, 48 chambers",
        coxeter_arrangement("B", 3))


def gen_coxeter_d4():
    return _arrangement_entry(
        "coxeter-d4", "rank-4 type-D reflection arrangement, 192 chambers",
        coxeter_arrangement("D", 4), with_complex=False)


def gen_generic_4():
    return _arrangement_entry(
        "generic-4",
        "four generic planes in rank 3, non-simplicial, 14 chambers",
        generic_arrangement(), with_complex=False)


def gen_d5_wall():
    """Wall slice of the rank-5 type-D reflection arrangement: restrict
    every reflection hyperplane to x4 = x5 and drop the degenerate one.
    13 hyperplanes in rank 4, simplicial, 240 chambers; the smallest
    catalog entry whose rank sums genuinely fail to commute."""
    normals5 = []
    for i in range(5):
        for j in range(i + 1, 5):
            a = [0] * 5
            a[i], a[j] = 1, -1
            normals5.append(tuple(a))
            a = list(a)
            a[j] = 1
            normals5.append(tuple(a))
    basis = ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
             (0, 0, 0, 1, 1))
    induced = set()
    for nr in normals5:
        vec = tuple(sum(x * y for x, y in zip(nr, b)) for b in basis)
        if any(vec):
            rep, _ = _primitive(vec)
            induced.add(rep)
    arr = Arrangement(sorted(induced))
    if len(arr.chambers) != 240 or not arr.is_simplicial():
        raise OracleMismatch("wall-slice enumeration is off")
    return _arrangement_entry(
        "d5-wall", "wall slice of the rank-5 type-D arrangement, "
        "240 chambers, rank sums do not commute", arr, with_complex=False)


# ---- buildings and free bands -----------------------------------------------

def gen_building(n, q):
    b = _buildings.build_building(n, q)
    return CatalogEntry(
        f"building-{n}-{q}",
        f"flag complex of F_{q}^{n}, {len(b.complex.chambers)} chambers",
        complex=b.complex, building=b)


def gen_free_lrb(n):
    band = free_lrb(n)
    return CatalogEntry(
        f"free-lrb-{n}",
        f"free left regular band on {n} letters, {band.n} elements",
        band=band)


# ---- registry ----------------------------------------------------------------

_FACTORIES = (
    ("ngon-3", "3-gon with the clockwise structure",
     lambda: gen_ngon(3)),
    ("ngon-4", "4-gon with the clockwise structure",
     lambda: gen_ngon(4)),
    ("ngon-5", "5-gon with the clockwise structure",
     lambda: gen_ngon(5)),
    ("ngon-6", "6-gon with the clockwise structure",
     lambda: gen_ngon(6)),
    ("ngon-7", "7-gon with the clockwise structure",
     lambda: gen_ngon(7)),
    ("ngon-8", "8-gon with the clockwise structure",
     lambda: gen_ngon(8)),
    ("hexagon", "hexagon with the metric structure and opposition",
     gen_hexagon),
    ("petersen", "Petersen pairs complex, the gate-property failure",
     gen_petersen),
    ("octants", "coordinate octants with metric structure and opposition",
     gen_octants),
    ("braid-a2", "essential braid arrangement on three letters, a hexagon",
     gen_braid_a2),
    ("coxeter-a3", "rank-3 braid reflection arrangement, 24 chambers",
     gen_coxeter_a3),
    ("coxeter-b3", "rank-3 hyperoctahedral reflection arrangement, "
     "48 chambers", gen_coxeter_b3),
    ("coxeter-d4", "rank-4 type-D reflection arrangement, 192 chambers",
     gen_coxeter_d4),
    ("generic-4", "four generic planes in rank 3, non-simplicial, "
     "14 chambers", gen_generic_4),
    ("d5-wall", "wall slice of the rank-5 type-D arrangement, 240 chambers, "
     "rank sums do not commute", gen_d5_wall),
    ("building-3-2", "flag complex of F_2^3, 21 chambers",
     lambda: gen_building(3, 2)),
    ("building-4-2", "flag complex of F_2^4, 315 chambers",
     lambda: gen_building(4, 2)),
    ("building-3-3", "flag complex of F_3^3, 52 chambers",
     lambda: gen_building(3, 3)),
    ("free-lrb-2", "free left regular band on 2 letters, 5 elements",
     lambda: gen_free_lrb(2)),
    ("free-lrb-3", "free left regular band on 3 letters, 16 elements",
     lambda: gen_free_lrb(3)),
)

_cache = {}


def names():
    return tuple(name for name, _, _ in _FACTORIES)


def summaries():
    return tuple((name, summary) for name, summary, _ in _FACTORIES)


def get(name, fresh=False):
    """Catalog entry by name; cached unless a fresh build is requested."""
    if not fresh and name in _cache:
        return _cache[name]
    for nm, _, factory in _FACTORIES:
        if nm == name:
            entry = factory()
            if not fresh:
                _cache[name] = entry
            return entry
    raise UnknownEntry(f"no catalog entry named {name!r}")


def entries(selection=None):
    return [get(nm) for nm in (selection or names())]


def thin_entries():
    """Entries bundling a thin complex, the home turf of the metric and
    duality checks."""
    out = []
    for nm in names():
        e = get(nm)
        if e.complex is not None and e.complex.is_thin()[0]:
            out.append(e)
    return out


def check_entry(entry, mode="auto", cap=10_000, samples=200, seed=0):
    """Run every checker the entry's bundled pieces come with."""
    rep = Report()
    if entry.structure is not None:
        c = entry.complex
        p, r, s = entry.structure
        rep.extend(check_projection(c, p))
        rep.extend(check_restriction(c, r))
        if mode == "auto":
            mode = "exhaustive" if len(c.chambers) <= 16 else "sampled"
        rep.extend(check_orders(c, s, mode=mode, cap=cap,
                                samples=samples, seed=seed))
    if entry.opposition is not None:
        p, r, s = entry.structure
        rep.extend(check_opposition(entry.complex, p, r, s, entry.opposition))
    if entry.arrangement is not None:
        rep.extend(entry.arrangement.check_faces())
    if entry.band is not None:
        rep.extend(entry.band.check_band())
        rep.extend(entry.band.check_axioms())
    if entry.building is not None:
        rep.extend(_buildings.check_counts(entry.building))
    if entry.name == "petersen":
        rep.extend(check_petersen(entry))
    if entry.name == "octants":
        rep.extend(_check_octants_match(entry))
    if entry.name.startswith("ngon-"):
        w = ngon_nonmetric_witness(entry)
        rep.check("ngon.clockwise-not-metric", w is not None,
                  "clockwise projection is nowhere separated from the metric"
                  if w is None else
                  f"face {entry.complex.face_token(w[0])} from "
                  f"{entry.complex.chamber_names[w[1]]} projects clockwise to "
                  f"{entry.complex.chamber_names[w[2]]}, nearest "
                  + ",".join(entry.complex.chamber_names[e] for e in w[3]))
    return rep
