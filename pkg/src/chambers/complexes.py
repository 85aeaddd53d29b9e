"""Finite pure simplicial complexes with their gallery metric.

A complex is built from its chambers (maximal faces, all of the same
rank); every subset of a chamber is materialised as a face, including
the empty face.  Faces are stored as integer bitmasks over the vertex
table, which keeps subset tests and residue lookups cheap at the scales
this package targets (a few hundred chambers, a few thousand faces).

Vertices may carry type labels.  A labelled complex must be balanced:
the labels of each chamber are pairwise distinct and exhaust the common
label set.  Everything metric (gallery distance, gates, descent faces)
works the same with or without labels.
"""

from collections import deque
from dataclasses import dataclass

from .errors import (
    BadLabelling,
    Disconnected,
    EmptyInput,
    GatePropertyFails,
    NeedsLabels,
    NotAFace,
    NotPure,
    ScaleExceeded,
)

EMPTY_FACE = 0

MAX_FACES = 200_000


def bits_of(mask):
    """Indices of the set bits of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def submasks(mask):
    """All subsets of mask, the full mask first, the empty mask last."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class GateViolation:
    face: int
    chamber: int
    kind: str        # 'tie' or 'additivity'
    detail: tuple    # tied chambers, or the chamber breaking additivity


@dataclass
class GateReport:
    passed: bool
    gates: dict
    violations: list
    violation_count: int


class Complex:

    def __init__(self, chambers, types=None, chamber_names=None, max_faces=MAX_FACES):
        chambers = [tuple(ch) for ch in chambers]
        if not chambers:
            raise EmptyInput("no chambers given")

        names = []
        index = {}
        for ch in chambers:
            for v in ch:
                v = str(v)
                if v not in index:
                    index[v] = len(names)
                    names.append(v)
        self.vertex_names = tuple(names)
        self.vertex_index = index

        masks = []
        for ch in chambers:
            m = 0
            for v in ch:
                b = 1 << index[str(v)]
                if m & b:
                    raise NotAFace(f"chamber {ch} repeats vertex {v}")
                m |= b
            masks.append(m)

        rank = masks[0].bit_count()
        for ch, m in zip(chambers, masks):
            if m.bit_count() != rank:
                raise NotPure(
                    f"chamber {ch} has {m.bit_count()} vertices, expected {rank}")
        if len(set(masks)) != len(masks):
            seen = {}
            for i, m in enumerate(masks):
                if m in seen:
                    raise NotPure(f"chambers {seen[m]} and {i} coincide")
                seen[m] = i
        self.rank = rank
        self.chambers = tuple(masks)

        if chamber_names is None:
            chamber_names = [self._token(m) for m in masks]
        else:
            chamber_names = [str(n) for n in chamber_names]
            if len(chamber_names) != len(masks):
                raise ValueError("one name per chamber required")
        self.chamber_names = tuple(chamber_names)
        self.chamber_index = {m: i for i, m in enumerate(masks)}
        self._name_to_chamber = {n: i for i, n in enumerate(chamber_names)}
        if len(self._name_to_chamber) != len(chamber_names):
            raise ValueError("chamber names must be distinct")

        self._init_types(types)
        self._init_faces(max_faces)
        self._init_adjacency()
        self._dist = {}
        self._check_connected()

    # ---- construction helpers ------------------------------------------

    def _init_types(self, types):
        if types is None:
            self.types = None
            self.labels = None
            self._label_index = None
            return
        per_vertex = []
        for v in self.vertex_names:
            if v not in types:
                raise BadLabelling(f"vertex {v} has no type")
            per_vertex.append(str(types[v]))
        labels = tuple(sorted(set(per_vertex)))
        if len(labels) != self.rank:
            raise BadLabelling(
                f"{len(labels)} labels for rank {self.rank}")
        label_index = {t: i for i, t in enumerate(labels)}
        for m in self.chambers:
            seen = set(per_vertex[v] for v in bits_of(m))
            if len(seen) != self.rank:
                raise BadLabelling(
                    f"chamber {self._token(m)} repeats a type")
        self.types = tuple(per_vertex)
        self.labels = labels
        self._label_index = label_index

    def _init_faces(self, max_faces):
        residue = {}
        for ci, m in enumerate(self.chambers):
            for f in submasks(m):
                if f in residue:
                    residue[f].append(ci)
                else:
                    residue[f] = [ci]
            if len(residue) > max_faces:
                raise ScaleExceeded(f"more than {max_faces} faces")
        self.residue_map = {f: tuple(sorted(set(cs))) for f, cs in residue.items()}
        self.faces = tuple(sorted(residue, key=self.face_sort_key))
        self.face_rank = {f: f.bit_count() for f in self.faces}

    def _init_adjacency(self):
        adj = [set() for _ in self.chambers]
        for f, res in self.residue_map.items():
            if f.bit_count() != self.rank - 1:
                continue
            for a in res:
                for b in res:
                    if a != b:
                        adj[a].add(b)
        self.adjacency = tuple(tuple(sorted(s)) for s in adj)

    def _check_connected(self):
        if len(self.chambers) <= 1:
            return
        seen = self.distances_from(0)
        for i, d in enumerate(seen):
            if d is None:
                raise Disconnected(
                    f"chamber {self.chamber_names[i]} unreachable from "
                    f"{self.chamber_names[0]}")

    # ---- tokens and lookup ----------------------------------------------

    def _token(self, mask):
        if mask == 0:
            return "-"
        return ",".join(sorted(self.vertex_names[b] for b in bits_of(mask)))

    def face_token(self, mask):
        return self._token(mask)

    def chamber_token(self, ci):
        return self.chamber_names[ci]

    def face_from_names(self, names):
        m = 0
        for v in names:
            v = str(v)
            if v not in self.vertex_index:
                raise NotAFace(f"unknown vertex {v}")
            m |= 1 << self.vertex_index[v]
        if m not in self.residue_map:
            raise NotAFace(f"{self._token(m)} is not a face")
        return m

    def parse_face(self, token):
        if token == "-":
            return EMPTY_FACE
        return self.face_from_names(token.split(","))

    def parse_chamber(self, token):
        if token in self._name_to_chamber:
            return self._name_to_chamber[token]
        m = self.parse_face(token)
        if m not in self.chamber_index:
            raise NotAFace(f"{token} is not a chamber")
        return self.chamber_index[m]

    def face_sort_key(self, mask):
        return (mask.bit_count(),
                tuple(sorted(self.vertex_names[b] for b in bits_of(mask))))

    # ---- basic queries -----------------------------------------------------

    def is_face(self, mask):
        return mask in self.residue_map

    def rank_of(self, mask):
        return mask.bit_count()

    def residue(self, mask):
        if mask not in self.residue_map:
            raise NotAFace(f"{self._token(mask)} is not a face")
        return self.residue_map[mask]

    def facets_of(self, mask):
        return [mask ^ (1 << b) for b in bits_of(mask)]

    def faces_of_rank(self, r):
        return [f for f in self.faces if self.face_rank[f] == r]

    def face_type_mask(self, mask):
        """Type set of a face, as a bitmask over the sorted label tuple."""
        if self.types is None:
            raise NeedsLabels("complex has no vertex types")
        t = 0
        for b in bits_of(mask):
            t |= 1 << self._label_index[self.types[b]]
        return t

    def type_token(self, type_mask):
        if type_mask == 0:
            return "-"
        return ",".join(self.labels[b] for b in bits_of(type_mask))

    @property
    def full_type_mask(self):
        if self.types is None:
            raise NeedsLabels("complex has no vertex types")
        return (1 << len(self.labels)) - 1

    # ---- gallery metric ------------------------------------------------------

    def distances_from(self, ci):
        if ci in self._dist:
            return self._dist[ci]
        dist = [None] * len(self.chambers)
        dist[ci] = 0
        queue = deque([ci])
        while queue:
            a = queue.popleft()
            for b in self.adjacency[a]:
                if dist[b] is None:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        dist = tuple(dist)
        self._dist[ci] = dist
        return dist

    def gallery_distance(self, a, b):
        d = self.distances_from(a)[b]
        if d is None:
            raise Disconnected(
                f"{self.chamber_names[b]} unreachable from {self.chamber_names[a]}")
        return d

    def diameter(self):
        return max(max(self.distances_from(i)) for i in range(len(self.chambers)))

    def geodesic_count(self, a, b):
        """Number of minimal galleries from a to b, exactly."""
        da = self.distances_from(a)
        target = da[b]
        count = {a: 1}
        order = sorted((i for i, d in enumerate(da) if d is not None and d <= target),
                       key=lambda i: da[i])
        for x in order:
            if x == a:
                continue
            count[x] = sum(count.get(p, 0)
                           for p in self.adjacency[x] if da[p] == da[x] - 1)
        return count.get(b, 0)

    def geodesics(self, a, b, cap=10**6):
        """Minimal galleries from a to b as chamber tuples.

        Returns (galleries, capped).  When the count exceeds cap the list
        holds the first cap galleries in canonical order and capped is True.
        """
        da = self.distances_from(a)
        out = []
        capped = False
        stack = [(b, (b,))]
        while stack:
            x, tail = stack.pop()
            if x == a:
                out.append(tail)
                if len(out) >= cap:
                    capped = stack != []
                    break
                continue
            preds = [p for p in self.adjacency[x] if da[p] == da[x] - 1]
            for p in reversed(preds):
                stack.append((p, (p,) + tail))
        return out, capped

    def is_on_geodesic(self, a, x, b):
        return (self.gallery_distance(a, x) + self.gallery_distance(x, b)
                == self.gallery_distance(a, b))

    def is_convex(self, chamber_ids):
        """Whether the set is closed under taking geodesics between its members."""
        ids = sorted(set(chamber_ids))
        member = set(ids)
        for a in ids:
            for b in ids:
                d = self.gallery_distance(a, b)
                da = self.distances_from(a)
                db = self.distances_from(b)
                for x in range(len(self.chambers)):
                    if x in member:
                        continue
                    if da[x] + db[x] == d:
                        return False, (a, x, b)
        return True, None

    # ---- thinness and gates ---------------------------------------------------

    def is_thin(self):
        """Every rank-1-below-chamber face lies in exactly two chambers."""
        for f in self.faces:
            if self.face_rank[f] == self.rank - 1:
                if len(self.residue_map[f]) != 2:
                    return False, f
        return True, None

    def check_gate_property(self, keep=50):
        """For every face F and chamber C, test that the chambers over F have a
        unique member nearest to C through which all gallery distances from C
        into the residue factor additively.
        """
        gates = {}
        violations = []
        nviol = 0
        for f in self.faces:
            res = self.residue_map[f]
            for c in range(len(self.chambers)):
                dist = self.distances_from(c)
                best = min(dist[e] for e in res)
                nearest = [e for e in res if dist[e] == best]
                if len(nearest) > 1:
                    nviol += 1
                    if len(violations) < keep:
                        violations.append(
                            GateViolation(f, c, "tie", tuple(nearest)))
                    continue
                d = nearest[0]
                dd = self.distances_from(d)
                bad = None
                for e in res:
                    if dist[e] != dist[d] + dd[e]:
                        bad = e
                        break
                if bad is not None:
                    nviol += 1
                    if len(violations) < keep:
                        violations.append(
                            GateViolation(f, c, "additivity", (d, bad)))
                    continue
                gates[(f, c)] = d
        passed = nviol == 0
        return GateReport(passed, gates if passed else {}, violations, nviol)

    def gate(self, face, c):
        """The chamber of the residue of face nearest to c, when unique and
        distance-additive; raises GatePropertyFails otherwise."""
        res = self.residue(face)
        dist = self.distances_from(c)
        best = min(dist[e] for e in res)
        nearest = [e for e in res if dist[e] == best]
        if len(nearest) > 1:
            names = ",".join(self.chamber_names[e] for e in nearest)
            raise GatePropertyFails(
                f"face {self._token(face)} and chamber {self.chamber_names[c]} "
                f"have tied nearest chambers {names}")
        d = nearest[0]
        dd = self.distances_from(d)
        for e in res:
            if dist[e] != dist[d] + dd[e]:
                raise GatePropertyFails(
                    f"distance to {self.chamber_names[e]} does not factor "
                    f"through {self.chamber_names[d]}")
        return d

    def descent_face(self, c, d):
        """Face of chamber d spanned by the vertices v such that some minimal
        gallery from c to d crosses the wall d minus v last."""
        if c == d:
            return EMPTY_FACE
        dist = self.distances_from(c)
        out = 0
        for b in bits_of(self.chambers[d]):
            wall = self.chambers[d] ^ (1 << b)
            for e in self.residue_map[wall]:
                if e != d and dist[e] == dist[d] - 1:
                    out |= 1 << b
                    break
        return out

    # ---- skeleta, Euler characteristic, derived complexes ---------------------

    def euler_reduced(self, max_rank=None):
        """Sum of (-1)^(rank-1) over faces of rank at most max_rank."""
        total = 0
        for f in self.faces:
            r = self.face_rank[f]
            if max_rank is not None and r > max_rank:
                continue
            total += -1 if (r % 2 == 0) else 1
        return total

    def link(self, face):
        """Link of a face: chambers over it with the face stripped.

        Returns (link complex, map from link chamber index to original
        chamber index).  Types are inherited on the remaining vertices.
        """
        if face not in self.residue_map:
            raise NotAFace(f"{self._token(face)} is not a face")
        res = self.residue_map[face]
        chamber_lists = []
        for ci in res:
            rest = self.chambers[ci] & ~face
            chamber_lists.append([self.vertex_names[b] for b in bits_of(rest)])
        types = None
        if self.types is not None and face != 0:
            keep = set()
            for ci in res:
                keep.update(bits_of(self.chambers[ci] & ~face))
            types = {self.vertex_names[b]: self.types[b] for b in keep}
        elif self.types is not None:
            types = {v: self.types[i] for i, v in enumerate(self.vertex_names)}
        link = Complex(chamber_lists, types=types,
                       chamber_names=[self.chamber_names[ci] for ci in res])
        return link, tuple(res)

    def restrict(self, chamber_ids):
        """Subcomplex spanned by the given chambers (must stay connected)."""
        ids = sorted(set(chamber_ids))
        if not ids:
            raise EmptyInput("no chambers selected")
        chamber_lists = [[self.vertex_names[b] for b in bits_of(self.chambers[i])]
                         for i in ids]
        types = None
        if self.types is not None:
            types = {v: self.types[self.vertex_index[v]]
                     for lst in chamber_lists for v in lst}
        sub = Complex(chamber_lists, types=types,
                      chamber_names=[self.chamber_names[i] for i in ids])
        return sub, tuple(ids)

    def __len__(self):
        return len(self.faces)

    def __repr__(self):
        lab = "labelled" if self.types is not None else "unlabelled"
        return (f"Complex(rank={self.rank}, vertices={len(self.vertex_names)}, "
                f"chambers={len(self.chambers)}, faces={len(self.faces)}, {lab})")
