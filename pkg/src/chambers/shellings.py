"""Shelling verification, certificates, links, and order reversal.

A shelling order is checked facet-wise: for each chamber past the
first, the part of it already covered must be a nonempty union of its
walls.  The certificate records, per chamber, which walls were covered
(its attachment set) and the restriction face spanned by the vertices
whose opposite wall was covered.  Chambers whose restriction is the
whole chamber each close off a sphere; the count is cross-checked
against the reduced Euler characteristic.
"""

from dataclasses import dataclass

from .complexes import EMPTY_FACE, bits_of, submasks
from .errors import EulerMismatch, NotAShelling, NotThin
from .orders import PartialOrder
from .reporting import Report


@dataclass
class ShellingCertificate:
    order: tuple            # chamber ids, shelling order
    covered_facets: tuple   # per position, frozenset of wall masks
    restriction: tuple      # per position, face mask
    position: dict          # chamber id -> position

    def restriction_of(self, chamber_id):
        return self.restriction[self.position[chamber_id]]

    def covered_of(self, chamber_id):
        return self.covered_facets[self.position[chamber_id]]

    def restriction_map(self):
        return {ci: self.restriction[pos] for pos, ci in enumerate(self.order)}


def verify_shelling(c, order):
    """Check that order is a shelling of c and return its certificate.

    Raises NotAShelling with the first offending position: either nothing
    of the new chamber was seen before, or some previously covered face
    of it sits in no covered wall.
    """
    order = tuple(order)
    if sorted(order) != list(range(len(c.chambers))):
        raise NotAShelling("order is not a permutation of the chambers")

    first_seen = {}
    covered = []
    restriction = []
    for pos, ci in enumerate(order):
        m = c.chambers[ci]
        walls = []
        rest = 0
        for b in bits_of(m):
            wall = m ^ (1 << b)
            if first_seen.get(wall, pos) < pos:
                walls.append(wall)
                rest |= 1 << b
        if pos > 0:
            if not walls:
                raise NotAShelling(
                    f"chamber {c.chamber_names[ci]} at position {pos} meets "
                    f"nothing previously shelled",
                    position=pos, witness=ci)
            for f in submasks(m):
                if f == m or first_seen.get(f, pos) >= pos:
                    continue
                if not any(f & ~w == 0 for w in walls):
                    raise NotAShelling(
                        f"face {c.face_token(f)} of chamber "
                        f"{c.chamber_names[ci]} at position {pos} was covered "
                        f"earlier but lies in no covered wall",
                        position=pos, witness=f)
        covered.append(frozenset(walls))
        restriction.append(rest)
        for f in submasks(m):
            if f not in first_seen:
                first_seen[f] = pos

    return ShellingCertificate(order, tuple(covered), tuple(restriction),
                               {ci: pos for pos, ci in enumerate(order)})


def restriction_to_order(c, restriction, refined=False):
    """Partial order generated by E -> D whenever the restriction of E lies
    in D; the refined variant also demands E and D share a wall.

    restriction maps chamber id to a face mask.  Exactly one chamber may
    have empty restriction (the source).
    """
    n = len(c.chambers)
    sources = [ci for ci in range(n) if restriction[ci] == EMPTY_FACE]
    if len(sources) != 1:
        raise ValueError(f"expected one empty restriction, found {len(sources)}")
    adjacent = [set(a) for a in c.adjacency] if refined else None
    pairs = []
    for e in range(n):
        re = restriction[e]
        for d in range(n):
            if e == d:
                continue
            if re & ~c.chambers[d]:
                continue
            if refined and d not in adjacent[e]:
                continue
            pairs.append((e, d))
    what = "refined closure" if refined else "closure"
    return PartialOrder.from_pairs(n, pairs, what=what)


def link_shelling(c, order, face):
    """Shell the link of a face by the induced order and compare the link
    certificate with the one predicted from the ambient certificate
    (covered walls through the face, with the face stripped).

    Returns (link complex, link certificate, report, chamber map).
    """
    cert = verify_shelling(c, order)
    link, chamber_map = c.link(face)
    induced = sorted(range(len(chamber_map)),
                     key=lambda li: cert.position[chamber_map[li]])
    link_cert = verify_shelling(link, induced)

    report = Report()
    agree = True
    witness = None
    for li in range(len(chamber_map)):
        ci = chamber_map[li]
        predicted = set()
        for w in cert.covered_of(ci):
            if face & ~w == 0:
                stripped = w & ~face
                predicted.add(link.face_from_names(
                    [c.vertex_names[b] for b in bits_of(stripped)]))
        if predicted != set(link_cert.covered_of(li)):
            agree = False
            witness = link.chamber_names[li]
            break
    report.check("link.shelling", True, c.face_token(face))
    report.check("link.certificate-inherited", agree,
                 *([witness] if witness else []))
    return link, link_cert, report, chamber_map


def sphere_count(c, cert):
    """Number of chambers whose restriction is the whole chamber, checked
    against the reduced Euler characteristic of the complex."""
    count = sum(1 for pos, ci in enumerate(cert.order)
                if cert.restriction[pos] == c.chambers[ci])
    chi = c.euler_reduced()
    sign = -1 if c.rank % 2 == 0 else 1
    if chi != sign * count:
        raise EulerMismatch(
            f"shelling closes {count} spheres but the reduced Euler "
            f"characteristic is {chi}")
    return count


def reverse_shelling_check(c, order):
    """On a thin complex, verify that the reversed order shells too, with
    complementary restrictions and complementary attachment sets."""
    thin, bad_face = c.is_thin()
    if not thin:
        raise NotThin(
            f"face {c.face_token(bad_face)} lies in "
            f"{len(c.residue(bad_face))} chambers, reversal needs exactly 2")
    cert = verify_shelling(c, order)
    report = Report()
    try:
        rev = verify_shelling(c, tuple(reversed(order)))
    except NotAShelling as exc:
        report.check("reversal.shelling", False, str(exc))
        return report
    report.check("reversal.shelling", True)

    ok_restr = True
    ok_facets = True
    witness_r = witness_f = None
    for ci in range(len(c.chambers)):
        m = c.chambers[ci]
        if rev.restriction_of(ci) != m & ~cert.restriction_of(ci):
            ok_restr = False
            witness_r = c.chamber_names[ci]
        want = set(c.facets_of(m)) - set(cert.covered_of(ci))
        if set(rev.covered_of(ci)) != want:
            ok_facets = False
            witness_f = c.chamber_names[ci]
    report.check("reversal.restriction-complement", ok_restr,
                 *([witness_r] if witness_r else []))
    report.check("reversal.facet-complement", ok_facets,
                 *([witness_f] if witness_f else []))

    from . import flags
    if c.types is not None:
        f_vec, h_vec = flags.flag_vectors(c)
        full = c.full_type_mask
        ok_ds = all(h_vec[j] == h_vec[full ^ j] for j in h_vec)
        bad = next((j for j in sorted(h_vec) if h_vec[j] != h_vec[full ^ j]), None)
        report.check("reversal.dehn-sommerville", ok_ds,
                     *([] if ok_ds else [c.type_token(bad)]))
    else:
        f_vec, h_vec = flags.rank_vectors(c)
        ok_ds = all(h_vec[j] == h_vec[c.rank - j] for j in range(c.rank + 1))
        report.check("reversal.dehn-sommerville", ok_ds)
    return report
