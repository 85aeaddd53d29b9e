"""Left regular bands given by an explicit product.

A band here is a finite set with an associative idempotent product
subject to the deletion law xyx = xy.  The support preorder x <= y iff
yx = y collapses to a join semilattice of support classes; the maximal
class plays the role of the chamber set and the face order F <= G iff
FG = G turns the band into the kind of poset the projection axioms
speak about.

Nothing is trusted: `check_band` re-derives every algebraic law from
the table and reports each as a separate line, and `check_axioms`
interprets the face poset and tests the projection axioms directly, so
a band that genuinely violates one of them (the free band does, for the
facet-determined axiom) produces an honest FAIL with a witness.
"""

import random
from itertools import permutations

from .errors import (
    ChamberError,
    InternalCheckError,
    NotGraded,
    ProductUndefined,
    ScaleExceeded,
)
from .reporting import Report


class LRB:
    """Band on elements 0..n-1 with a product callback and print names."""

    def __init__(self, n, product, names, ranks=None):
        if len(names) != n:
            raise ValueError("one name per element required")
        if len(set(names)) != n:
            raise ValueError("element names must be distinct")
        self.n = n
        self.names = list(names)
        self.name_index = {s: i for i, s in enumerate(names)}
        self._product = product
        self._memo = {}
        self._below = None
        self._classes = None
        self._ranks = None
        if ranks is not None:
            self._claimed_ranks = list(ranks)
        else:
            self._claimed_ranks = None

    @classmethod
    def from_table(cls, names, table):
        """Band from an explicit dict (x, y) -> z of element indices."""
        n = len(names)
        for x in range(n):
            for y in range(n):
                if (x, y) not in table:
                    raise ProductUndefined(
                        f"product {names[x]} * {names[y]} missing")
                z = table[(x, y)]
                if not 0 <= z < n:
                    raise ProductUndefined(
                        f"product {names[x]} * {names[y]} maps outside")
        return cls(n, lambda x, y: table[(x, y)], names)

    def prod(self, x, y):
        key = (x, y)
        out = self._memo.get(key)
        if out is None:
            out = self._product(x, y)
            self._memo[key] = out
        return out

    # ---- support structure -------------------------------------------------

    def _support_reach(self):
        """Reachability closure of the support preorder x <= y iff yx = y,
        as one bitmask of predecessors per element."""
        if self._below is not None:
            return self._below
        n = self.n
        below = [0] * n
        for y in range(n):
            m = 0
            for x in range(n):
                if self.prod(y, x) == y:
                    m |= 1 << x
            below[y] = m
        # closure, so that broken tables still get well-defined classes
        changed = True
        while changed:
            changed = False
            for y in range(n):
                m = below[y]
                acc = m
                for x in range(n):
                    if m >> x & 1:
                        acc |= below[x]
                if acc != below[y]:
                    below[y] = acc
                    changed = True
        self._below = below
        return below

    def support_classes(self):
        """Support classes (mutual-reachability classes of the preorder),
        each a sorted tuple, with a partial order between them."""
        if self._classes is not None:
            return self._classes
        below = self._support_reach()
        class_of = [None] * self.n
        members = []
        for x in range(self.n):
            if class_of[x] is not None:
                continue
            cls = [y for y in range(self.n)
                   if below[x] >> y & 1 and below[y] >> x & 1]
            cls = sorted(set(cls) | {x})
            for y in cls:
                class_of[y] = len(members)
            members.append(tuple(cls))
        k = len(members)
        leq = [[False] * k for _ in range(k)]
        for a in range(k):
            for b in range(k):
                leq[a][b] = bool(below[members[b][0]] >> members[a][0] & 1) \
                    or a == b
        self._classes = (members, class_of, leq)
        return self._classes

    def class_of(self, x):
        return self.support_classes()[1][x]

    def top_class(self):
        members, _, leq = self.support_classes()
        maximal = [a for a in range(len(members))
                   if all(not leq[a][b] or a == b for b in range(len(members)))]
        if len(maximal) != 1:
            raise ChamberError(
                f"support order has {len(maximal)} maximal classes")
        return maximal[0]

    def chambers(self):
        members, _, _ = self.support_classes()
        return list(members[self.top_class()])

    def is_chamber(self, x):
        return self.class_of(x) == self.top_class()

    @property
    def ranks(self):
        """Lattice rank of each element's support class.  Requires the
        support order to be graded with a least class."""
        if self._ranks is not None:
            return self._ranks
        members, class_of, leq = self.support_classes()
        k = len(members)
        minimal = [a for a in range(k)
                   if all(not leq[b][a] or a == b for b in range(k))]
        if len(minimal) != 1:
            raise NotGraded(
                f"support order has {len(minimal)} minimal classes")
        bottom = minimal[0]
        # longest chain from the bottom
        order = sorted(range(k), key=lambda a: sum(leq[b][a] for b in range(k)))
        height = [None] * k
        height[bottom] = 0
        for a in order:
            if a == bottom:
                continue
            preds = [b for b in range(k) if leq[b][a] and b != a]
            if not preds or any(height[b] is None for b in preds):
                raise NotGraded("support order is not connected from bottom")
            height[a] = 1 + max(height[b] for b in preds)
        for a in range(k):
            for b in range(k):
                if a == b or not leq[a][b]:
                    continue
                strictly_between = any(
                    leq[a][c] and leq[c][b] and c not in (a, b)
                    for c in range(k))
                if not strictly_between and height[b] != height[a] + 1:
                    raise NotGraded(
                        f"cover {a} < {b} jumps rank "
                        f"{height[a]} -> {height[b]}")
        ranks = [height[class_of[x]] for x in range(self.n)]
        if self._claimed_ranks is not None and ranks != self._claimed_ranks:
            raise InternalCheckError(
                "support-lattice ranks disagree with the caller's ranks")
        self._ranks = ranks
        return ranks

    @property
    def top_rank(self):
        return self.ranks[self.chambers()[0]]

    def rank_class(self, k):
        return [x for x in range(self.n) if self.ranks[x] == k]

    def sub_band(self, x):
        """The band of all elements whose support lies below supp(x)."""
        members, class_of, leq = self.support_classes()
        cx = class_of[x]
        keep = sorted(y for y in range(self.n) if leq[class_of[y]][cx])
        back = {y: i for i, y in enumerate(keep)}

        def prod(i, j):
            z = self.prod(keep[i], keep[j])
            if z not in back:
                raise ProductUndefined(
                    f"product escapes the sub-band at {self.names[z]}")
            return back[z]

        ranks = None
        if self._ranks is not None:
            ranks = [self._ranks[y] for y in keep]
        return LRB(len(keep), prod, [self.names[y] for y in keep],
                   ranks=ranks)

    # ---- the band laws -----------------------------------------------------

    def check_band(self, cap=2_000_000, seed=0) -> Report:
        report = Report()
        n = self.n
        bad = next((x for x in range(n) if self.prod(x, x) != x), None)
        report.check("band.idempotent", bad is None,
                     *(() if bad is None else (self.names[bad],)))

        witness = ()
        for x in range(n):
            for y in range(n):
                xy = self.prod(x, y)
                if self.prod(xy, x) != xy:
                    witness = (self.names[x], self.names[y])
                    break
            if witness:
                break
        report.check("band.deletion", not witness, *witness)

        witness = ()
        if n ** 3 <= cap:
            mode = f"mode=exhaustive triples={n ** 3}"
            triples = ((x, y, z) for x in range(n)
                       for y in range(n) for z in range(n))
        else:
            rng = random.Random(seed)
            count = min(200_000, max(cap // max(n, 1), 10_000))
            mode = f"mode=sampled triples={count} seed={seed}"
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                       for _ in range(count))
        for x, y, z in triples:
            if self.prod(self.prod(x, y), z) != self.prod(x, self.prod(y, z)):
                witness = (self.names[x], self.names[y], self.names[z])
                break
        report.check("band.associative", not witness, mode, *witness)

        # transitivity of the raw support preorder, before closure
        witness = ()
        raw = [[self.prod(y, x) == y for x in range(n)] for y in range(n)]
        for x in range(n):
            for y in range(n):
                if not raw[y][x]:
                    continue
                for z in range(n):
                    if raw[z][y] and not raw[z][x]:
                        witness = (self.names[x], self.names[y],
                                   self.names[z])
                        break
                if witness:
                    break
            if witness:
                break
        report.check("band.support-preorder", not witness, *witness)

        members, class_of, leq = self.support_classes()
        k = len(members)
        witness = ()
        for x in range(n):
            for y in range(n):
                cz = class_of[self.prod(x, y)]
                cx, cy = class_of[x], class_of[y]
                if not (leq[cx][cz] and leq[cy][cz]):
                    witness = ("not-above", self.names[x], self.names[y])
                    break
                for c in range(k):
                    if leq[cx][c] and leq[cy][c] and not leq[cz][c]:
                        witness = ("not-least", self.names[x], self.names[y])
                        break
                if witness:
                    break
            if witness:
                break
        report.check("band.support-homomorphism", not witness, *witness)

        witness = ()
        for x in range(n):
            for y in range(n):
                absorbed = self.prod(x, y) == x
                dominated = leq[class_of[y]][class_of[x]]
                if absorbed != dominated:
                    witness = (self.names[x], self.names[y],
                               "absorbed" if absorbed else "dominated")
                    break
            if witness:
                break
        report.check("band.delete-absorb", not witness, *witness)

        try:
            top = self.top_class()
            chs = members[top]
            witness = ()
            for x in range(n):
                for c in chs:
                    if class_of[self.prod(x, c)] != top:
                        witness = (self.names[x], self.names[c])
                        break
                if witness:
                    break
            report.check("band.chamber-ideal", not witness, *witness)
        except ChamberError as exc:
            report.check("band.chamber-ideal", False, str(exc))

        witness = ()
        for x in range(n):
            for y in range(n):
                if x != y and self.prod(x, y) == y and self.prod(y, x) == x:
                    witness = (self.names[x], self.names[y])
                    break
            if witness:
                break
        report.check("band.face-order", not witness, *witness)
        return report

    # ---- face order and the projection axioms ------------------------------

    def face_leq(self, x, y):
        return self.prod(x, y) == y

    def _below_masks(self):
        """below[y] = bitmask of x with x <= y in the face order."""
        out = []
        for y in range(self.n):
            m = 0
            for x in range(self.n):
                if self.prod(x, y) == y:
                    m |= 1 << x
            out.append(m)
        return out

    def check_axioms(self) -> Report:
        """Interpret products into chambers as projections and test the
        three projection axioms plus the hypotheses under which a band
        is guaranteed to satisfy the first and third."""
        report = Report()
        chs = self.chambers()
        n = self.n

        witness = ()
        for f in range(n):
            for c in chs:
                if not self.face_leq(f, self.prod(f, c)):
                    witness = (self.names[f], self.names[c])
                    break
            if witness:
                break
        report.check("projection.result-contains-face", not witness, *witness)

        witness = ()
        for f in range(n):
            for c in chs:
                if self.face_leq(f, c) and self.prod(f, c) != c:
                    witness = (self.names[f], self.names[c])
                    break
            if witness:
                break
        report.check("projection.fixed-when-contained", not witness, *witness)

        witness = ()
        for f in range(n):
            for g in range(n):
                if not self.face_leq(f, self.prod(f, g)):
                    witness = (self.names[f], self.names[g])
                    break
            if witness:
                break
        report.check("band.below-products", not witness, *witness)

        below = self._below_masks()
        witness = ()
        for f in range(n):
            for c in chs:
                d = self.prod(f, c)
                mid = below[d]
                g = mid
                while g and not witness:
                    low = g & -g
                    gi = low.bit_length() - 1
                    g ^= low
                    if self.face_leq(f, gi) and self.prod(gi, c) != d:
                        witness = (self.names[f], self.names[c],
                                   self.names[gi])
                if witness:
                    break
            if witness:
                break
        report.check("projection.interval-constant", not witness, *witness)

        witness = ()
        covers = {}
        for d in chs:
            cov = []
            strict = [g for g in range(n) if g != d and below[d] >> g & 1]
            for g in strict:
                if not any(h != g and below[h] >> g & 1 for h in strict):
                    cov.append(g)
            covers[d] = cov
        for d in chs:
            for f in range(n):
                if not (below[d] >> f & 1) or f == d:
                    continue
                between = [g for g in covers[d] if self.face_leq(f, g)]
                for c in chs:
                    if all(self.prod(g, c) == d for g in between) \
                            and self.prod(f, c) != d:
                        witness = (self.names[f], self.names[c],
                                   self.names[d])
                        break
                if witness:
                    break
            if witness:
                break
        report.check("projection.facet-determined", not witness, *witness)

        witness = ()
        for c in chs:
            proj_faces = {}
            for e in chs:
                m = 0
                g = below[e]
                while g:
                    low = g & -g
                    fi = low.bit_length() - 1
                    g ^= low
                    if self.prod(fi, c) == e:
                        m |= 1 << fi
                proj_faces[e] = m
            reach_to = {}
            for d in chs:
                reach = {d}
                stack = [d]
                while stack:
                    e2 = stack.pop()
                    for e1 in chs:
                        if e1 not in reach and proj_faces[e1] & below[e2]:
                            reach.add(e1)
                            stack.append(e1)
                reach_to[d] = reach
            for f in range(n):
                d = self.prod(f, c)
                bad = next((e for e in reach_to[d]
                            if self.prod(f, e) != d), None)
                if bad is not None:
                    witness = (self.names[f], self.names[c],
                               self.names[bad], self.names[d])
                    break
            if witness:
                break
        report.check("projection.gallery-stable", not witness, *witness)
        return report


def free_lrb(n):
    """Free left regular band on n letters: elements are the
    duplicate-free sequences, the product concatenates and keeps the
    first occurrence of each letter."""
    if not 1 <= n <= 6:
        raise ScaleExceeded("free band supported for 1 <= n <= 6")
    elements = []
    for k in range(n + 1):
        elements.extend(permutations(range(1, n + 1), k))
    elements.sort(key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(elements)}

    def prod(i, j):
        merged = list(elements[i])
        seen = set(merged)
        for v in elements[j]:
            if v not in seen:
                seen.add(v)
                merged.append(v)
        return index[tuple(merged)]

    names = [",".join(map(str, s)) if s else "-" for s in elements]
    return LRB(len(elements), prod, names,
               ranks=[len(s) for s in elements])
