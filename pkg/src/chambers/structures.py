"""Projection tables, restriction families, order families: the three
equivalent ways of putting a combinatorial product on a chamber complex,
with checkers for the defining axioms, exact conversions between the
three presentations, the metric realisation on gated complexes, and
opposition maps.

All checkers return reports with concrete witnesses instead of raising;
conversions raise when the input is too broken to convert (a cyclic
closure, a residue without a unique minimum).
"""

import random
from collections import namedtuple

from .complexes import EMPTY_FACE, bits_of, submasks
from .errors import (
    GatePropertyFails,
    MultipleOpposites,
    NoOpposite,
    NotAFace,
    NoUniqueMinimum,
    OracleMismatch,
)
from .orders import PartialOrder
from .reporting import Report
from . import shellings


class ProjectionTable:
    """Total map (face, chamber) -> chamber."""

    def __init__(self, c, table):
        self.complex = c
        want = len(c.faces) * len(c.chambers)
        if len(table) != want:
            raise ValueError(f"projection table has {len(table)} entries, "
                             f"needs {want}")
        nch = len(c.chambers)
        for (f, ci), d in table.items():
            if f not in c.residue_map:
                raise NotAFace(f"{c.face_token(f)} is not a face")
            if not (0 <= ci < nch and 0 <= d < nch):
                raise ValueError("projection table mentions unknown chambers")
        self.table = dict(table)

    def project(self, face, ci):
        return self.table[(face, ci)]

    def __eq__(self, other):
        return isinstance(other, ProjectionTable) and self.table == other.table

    def __repr__(self):
        return f"ProjectionTable({self.complex!r})"


class RestrictionFamily:
    """Total map (base chamber, chamber) -> face."""

    def __init__(self, c, table):
        self.complex = c
        want = len(c.chambers) ** 2
        if len(table) != want:
            raise ValueError(f"restriction family has {len(table)} entries, "
                             f"needs {want}")
        for (ci, d), f in table.items():
            if f not in c.residue_map:
                raise NotAFace(f"{c.face_token(f)} is not a face")
        self.table = dict(table)

    def restriction(self, ci, d):
        return self.table[(ci, d)]

    def column(self, ci):
        return {d: self.table[(ci, d)] for d in range(len(self.complex.chambers))}

    def __eq__(self, other):
        return isinstance(other, RestrictionFamily) and self.table == other.table

    def __repr__(self):
        return f"RestrictionFamily({self.complex!r})"


class OrderFamily:
    """One partial order on the chambers per base chamber."""

    def __init__(self, c, orders):
        self.complex = c
        orders = tuple(orders)
        if len(orders) != len(c.chambers):
            raise ValueError("one order per chamber required")
        for o in orders:
            if o.n != len(c.chambers):
                raise ValueError("order size must match the chamber count")
        self.orders = orders

    def order(self, ci):
        return self.orders[ci]

    def leq(self, ci, a, b):
        return self.orders[ci].leq(a, b)

    def __eq__(self, other):
        return isinstance(other, OrderFamily) and self.orders == other.orders

    def __repr__(self):
        return f"OrderFamily({self.complex!r})"


class OppositionMap:

    def __init__(self, c, mapping):
        self.complex = c
        self.mapping = tuple(mapping)
        if sorted(self.mapping) != list(range(len(c.chambers))):
            raise ValueError("opposition must be a bijection on chambers")

    def __getitem__(self, ci):
        return self.mapping[ci]

    def is_involution(self):
        return all(self.mapping[self.mapping[ci]] == ci
                   for ci in range(len(self.mapping)))

    def __eq__(self, other):
        return isinstance(other, OppositionMap) and self.mapping == other.mapping


MetricStructure = namedtuple("MetricStructure",
                             ["projection", "restriction", "orders"])


# ---------------------------------------------------------------------------
# axiom checkers
# ---------------------------------------------------------------------------

def check_projection(c, p):
    """The three product axioms, the wall-determination axiom, and
    stability along weak galleries."""
    report = Report()
    nch = len(c.chambers)

    ok, witness = True, ()
    for (f, ci), d in p.table.items():
        if f & ~c.chambers[d]:
            ok, witness = False, (c.face_token(f), c.chamber_names[ci],
                                  c.chamber_names[d])
            break
    report.check("projection.result-contains-face", ok, *witness)

    ok, witness = True, ()
    for ci in range(nch):
        for f in submasks(c.chambers[ci]):
            if p.table[(f, ci)] != ci:
                ok, witness = False, (c.face_token(f), c.chamber_names[ci])
                break
        if not ok:
            break
    report.check("projection.fixed-when-contained", ok, *witness)

    ok, witness = True, ()
    for (f, ci), d in p.table.items():
        between = c.chambers[d] & ~f
        if f & ~c.chambers[d]:
            continue
        for extra in submasks(between):
            g = f | extra
            if p.table[(g, ci)] != d:
                ok, witness = False, (c.face_token(f), c.face_token(g),
                                      c.chamber_names[ci])
                break
        if not ok:
            break
    report.check("projection.interval-constant", ok, *witness)

    ok, witness = True, ()
    for d in range(nch):
        m = c.chambers[d]
        walls = c.facets_of(m)
        for f in submasks(m):
            over = [g for g in walls if f & ~g == 0]
            for ci in range(nch):
                if p.table[(f, ci)] == d:
                    continue
                if all(p.table[(g, ci)] == d for g in over):
                    ok, witness = False, (c.face_token(f),
                                          c.chamber_names[d],
                                          c.chamber_names[ci])
                    break
            if not ok:
                break
        if not ok:
            break
    report.check("projection.facet-determined", ok, *witness)

    report.check("projection.gallery-stable", *_gallery_stable(c, p))
    return report


def _gallery_stable(c, p):
    """Stability of projections along weak galleries: whenever a gallery
    C1 - ... - D exists in which each chamber projects the base onto the
    previous one through a shared face, the face must send C1 to D too."""
    nch = len(c.chambers)
    for ci in range(nch):
        faces_to = {}
        for f in c.faces:
            faces_to.setdefault(p.table[(f, ci)], []).append(f)
        pred = [set() for _ in range(nch)]     # pred[e2] = chambers e1 -> e2
        for e1 in range(nch):
            for f in faces_to.get(e1, ()):
                if f & ~c.chambers[e1]:
                    continue                   # shared face must lie in e1
                for e2 in c.residue_map[f]:
                    if e2 != e1:
                        pred[e2].add(e1)
        for f in c.faces:
            d = p.table[(f, ci)]
            reach = {d}
            stack = [d]
            while stack:
                x = stack.pop()
                for y in pred[x]:
                    if y not in reach:
                        reach.add(y)
                        stack.append(y)
            for c1 in reach:
                if p.table[(f, c1)] != d:
                    return False, (c.face_token(f), c.chamber_names[ci],
                                   c.chamber_names[c1], c.chamber_names[d])
    return (True,)


def check_restriction(c, r):
    """Base normalisation, containment, the interval partition of the face
    set, and monotonicity along chains of restriction inequalities."""
    report = Report()
    nch = len(c.chambers)

    ok, witness = True, ()
    for ci in range(nch):
        if r.table[(ci, ci)] != EMPTY_FACE:
            ok, witness = False, (c.chamber_names[ci],)
            break
    report.check("restriction.self-empty", ok, *witness)

    ok, witness = True, ()
    for (ci, d), f in r.table.items():
        if f & ~c.chambers[d]:
            ok, witness = False, (c.chamber_names[ci], c.chamber_names[d],
                                  c.face_token(f))
            break
    report.check("restriction.within-chamber", ok, *witness)

    ok, witness = True, ()
    for ci in range(nch):
        seen = {}
        for d in range(nch):
            base = r.table[(ci, d)]
            m = c.chambers[d]
            if base & ~m:
                continue
            for extra in submasks(m & ~base):
                g = base | extra
                seen[g] = seen.get(g, 0) + 1
        for f in c.faces:
            if seen.get(f, 0) != 1:
                ok, witness = False, (c.chamber_names[ci], c.face_token(f),
                                      seen.get(f, 0))
                break
        if not ok:
            break
    report.check("restriction.interval-partition", ok, *witness)

    ok, witness = True, ()
    for ci in range(nch):
        rows = [1 << e for e in range(nch)]
        for e in range(nch):
            re = r.table[(ci, e)]
            for d in range(nch):
                if re & ~c.chambers[d] == 0:
                    rows[e] |= 1 << d
        for k in range(nch):
            rk = rows[k]
            bit = 1 << k
            for i in range(nch):
                if rows[i] & bit:
                    rows[i] |= rk
        for c1 in range(nch):
            row = rows[c1]
            while row:
                low = row & -row
                d = low.bit_length() - 1
                row ^= low
                rc = r.table[(ci, d)]
                rc1 = r.table[(c1, d)]
                if rc & ~c.chambers[d] or rc1 & ~rc:
                    ok, witness = False, (c.chamber_names[ci],
                                          c.chamber_names[c1],
                                          c.chamber_names[d])
                    break
            if not ok:
                break
        if not ok:
            break
    report.check("restriction.chain-monotone", ok, *witness)
    return report


def check_orders(c, s, mode="exhaustive", cap=10_000, samples=200, seed=0):
    """Unique local minima, shelling of linear extensions, and tail
    compatibility.

    In exhaustive mode every linear extension of every base order is
    verified, as long as their number stays within cap; otherwise the
    check falls back to the sampled regime (first extension plus a batch
    of seeded random ones per base) and says so in the report.
    """
    report = Report()
    nch = len(c.chambers)

    ok, witness = True, ()
    for f in c.faces:
        res = c.residue_map[f]
        for ci in range(nch):
            mins = s.orders[ci].minima(res)
            good = len(mins) == 1
            if good and f == EMPTY_FACE:
                good = mins[0] == ci
            if not good:
                names = "|".join(c.chamber_names[m] for m in mins)
                ok, witness = False, (c.face_token(f), c.chamber_names[ci],
                                      names)
                break
        if not ok:
            break
    report.check("order.unique-local-minimum", ok, *witness)

    rng = random.Random(seed)
    ok, witness = True, ()
    ran_mode = mode
    total = 0
    for ci in range(nch):
        order = s.orders[ci]
        sample_this = mode == "sampled"
        if not sample_this and order.count_linear_extensions(cap) is None:
            sample_this = True
            ran_mode = "sampled"
        if sample_this:
            first = next(iter(order.linear_extensions()))
            extensions = [first] + [order.random_extension(rng)
                                    for _ in range(samples)]
        else:
            extensions = order.linear_extensions()
        for ext in extensions:
            total += 1
            try:
                shellings.verify_shelling(c, ext)
            except Exception as exc:
                ok, witness = False, (c.chamber_names[ci], str(exc))
                break
        if not ok:
            break
    report.check("order.extensions-shell", ok,
                 f"mode={ran_mode}", f"verified={total}", *witness)

    ok, witness = True, ()
    for ci in range(nch):
        rows_c = s.orders[ci].rows
        for d in range(nch):
            rows_d = s.orders[d].rows
            row = rows_c[d]
            while row:
                low = row & -row
                d1 = low.bit_length() - 1
                row ^= low
                if rows_c[d1] & ~rows_d[d1]:
                    bad = (rows_c[d1] & ~rows_d[d1])
                    d2 = (bad & -bad).bit_length() - 1
                    ok, witness = False, (c.chamber_names[ci],
                                          c.chamber_names[d],
                                          c.chamber_names[d1],
                                          c.chamber_names[d2])
                    break
            if not ok:
                break
        if not ok:
            break
    report.check("order.tail-compatible", ok, *witness)
    return report


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def projection_to_restriction(c, p):
    """Restriction of D from C: the vertices of D whose deleted wall does
    not project C back onto D."""
    table = {}
    nch = len(c.chambers)
    for ci in range(nch):
        for d in range(nch):
            m = c.chambers[d]
            rest = 0
            for b in bits_of(m):
                if p.table[(m ^ (1 << b), ci)] != d:
                    rest |= 1 << b
            table[(ci, d)] = rest
    return RestrictionFamily(c, table)


def restriction_to_orders(c, r):
    """Transitive closure of: E precedes D whenever the restriction of E
    from the base fits inside D.  Cycles raise NotAPartialOrder."""
    nch = len(c.chambers)
    orders = []
    for ci in range(nch):
        pairs = []
        for e in range(nch):
            re = r.table[(ci, e)]
            for d in range(nch):
                if e != d and re & ~c.chambers[d] == 0:
                    pairs.append((e, d))
        orders.append(PartialOrder.from_pairs(
            nch, pairs, what=f"order at base {c.chamber_names[ci]}"))
    return OrderFamily(c, orders)


def orders_to_projection(c, s):
    """Projection of C onto a face: the minimum of the face's residue in
    the base-C order.  Raises NoUniqueMinimum when that minimum is
    missing or ambiguous."""
    table = {}
    for f in c.faces:
        res = c.residue_map[f]
        for ci in range(len(c.chambers)):
            order = s.orders[ci]
            mins = order.minima(res)
            if len(mins) != 1:
                names = "|".join(c.chamber_names[m] for m in mins)
                raise NoUniqueMinimum(
                    f"residue of {c.face_token(f)} has no unique minimal "
                    f"chamber under base {c.chamber_names[ci]} "
                    f"(candidates {names})")
            table[(f, ci)] = mins[0]
    return ProjectionTable(c, table)


# ---------------------------------------------------------------------------
# metric realisation
# ---------------------------------------------------------------------------

def metric_projection(c):
    """Gate map as a projection table; fails loudly when some residue has
    no gate."""
    gr = c.check_gate_property()
    if not gr.passed:
        v = gr.violations[0]
        raise GatePropertyFails(
            f"face {c.face_token(v.face)} with chamber "
            f"{c.chamber_names[v.chamber]}: {v.kind} "
            f"({'|'.join(c.chamber_names[x] for x in v.detail)})")
    return ProjectionTable(c, gr.gates)


def metric_restriction(c):
    """Descent faces as a restriction family (no gate needed)."""
    table = {}
    nch = len(c.chambers)
    for ci in range(nch):
        for d in range(nch):
            table[(ci, d)] = c.descent_face(ci, d)
    return RestrictionFamily(c, table)


def metric_orders(c):
    """Geodesic orders: D before E when D lies on a minimal gallery from
    the base to E."""
    nch = len(c.chambers)
    orders = []
    for ci in range(nch):
        dc = c.distances_from(ci)
        rows = []
        for d in range(nch):
            dd = c.distances_from(d)
            row = 0
            for e in range(nch):
                if dc[d] + dd[e] == dc[e]:
                    row |= 1 << e
            rows.append(row)
        orders.append(PartialOrder(nch, rows))
    return OrderFamily(c, orders)


def metric_structure(c):
    """The gate projection, descent restriction, and geodesic orders,
    with their mutual conversions asserted."""
    p = metric_projection(c)
    r = metric_restriction(c)
    s = metric_orders(c)
    if projection_to_restriction(c, p) != r:
        raise OracleMismatch("gate projection and descent restriction disagree")
    if restriction_to_orders(c, r) != s:
        raise OracleMismatch("descent restriction and geodesic orders disagree")
    if orders_to_projection(c, s) != p:
        raise OracleMismatch("geodesic orders and gate projection disagree")
    return MetricStructure(p, r, s)


# ---------------------------------------------------------------------------
# opposition
# ---------------------------------------------------------------------------

def find_opposition(c, r):
    """The chamber whose restriction from the base is itself, per base."""
    mapping = []
    for ci in range(len(c.chambers)):
        cands = [d for d in range(len(c.chambers))
                 if r.table[(ci, d)] == c.chambers[d]]
        if not cands:
            raise NoOpposite(f"no chamber is fully new from "
                             f"{c.chamber_names[ci]}")
        if len(cands) > 1:
            names = "|".join(c.chamber_names[d] for d in cands)
            raise MultipleOpposites(
                f"{c.chamber_names[ci]} has candidates {names}")
        mapping.append(cands[0])
    return OppositionMap(c, mapping)


def find_opposition_by_order(c, s):
    """Alternative route: the unique maximum of each base order."""
    mapping = []
    for ci in range(len(c.chambers)):
        order = s.orders[ci]
        maxima = [d for d in range(order.n)
                  if order.up_mask(d) == (1 << d)]
        if len(maxima) > 1:
            raise MultipleOpposites(
                f"{c.chamber_names[ci]} has {len(maxima)} maximal chambers")
        if not maxima:
            raise NoOpposite(f"{c.chamber_names[ci]} has no maximal chamber")
        mapping.append(maxima[0])
    return OppositionMap(c, mapping)


def check_opposition(c, p, r, s, opp):
    """Wall splitting, complementary restrictions, order reversal, the
    involution property, and agreement of the three criteria."""
    report = Report()
    nch = len(c.chambers)

    report.check("opposite.involution", opp.is_involution())

    ok, witness = True, ()
    walls = [f for f in c.faces if c.face_rank[f] == c.rank - 1]
    for g in walls:
        for ci in range(nch):
            if p.table[(g, ci)] == p.table[(g, opp[ci])]:
                ok, witness = False, (c.face_token(g), c.chamber_names[ci])
                break
        if not ok:
            break
    p4 = report.check("opposite.facet-split", ok, *witness)

    ok, witness = True, ()
    for ci in range(nch):
        for d in range(nch):
            a = r.table[(ci, d)]
            b = r.table[(opp[ci], d)]
            if a | b != c.chambers[d] or a & b:
                ok, witness = False, (c.chamber_names[ci], c.chamber_names[d])
                break
        if not ok:
            break
    r4 = report.check("opposite.complementary-types", ok, *witness)

    ok, witness = True, ()
    for ci in range(nch):
        if s.orders[ci] != s.orders[opp[ci]].reverse():
            ok, witness = False, (c.chamber_names[ci],)
            break
    s4 = report.check("opposite.order-reversal", ok, *witness)

    report.check("opposite.agreement", p4 == r4 == s4,
                 f"facet-split={p4}", f"complement={r4}", f"reversal={s4}")

    # finer per-chamber symmetry of the local h table
    ok, witness = True, ()
    for d in range(nch):
        counts = {}
        for ci in range(nch):
            f = r.table[(ci, d)]
            key = c.face_type_mask(f) if c.types is not None else f.bit_count()
            counts[key] = counts.get(key, 0) + 1
        full = c.full_type_mask if c.types is not None else c.rank
        for key, n in counts.items():
            mate = (full ^ key) if c.types is not None else full - key
            if counts.get(mate, 0) != n:
                ok, witness = False, (c.chamber_names[d], key, mate)
                break
        if not ok:
            break
    report.check("opposite.local-ds", ok, *witness)
    return report
