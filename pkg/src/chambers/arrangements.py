"""Central hyperplane arrangements with integer normals.

Faces are sign vectors (covectors), one entry in {-1, 0, +1} per
hyperplane, enumerated exactly: for every flat of the intersection
lattice the chambers of the induced arrangement on that flat are found
by breadth-first wall crossings, with feasibility decided by exact
Fourier-Motzkin elimination over the integers.  No floating point
anywhere.

The composition product (take the first nonzero sign coordinatewise)
makes the face set a left regular band; `lrb()` exports it in the shape
the band and walk modules consume.  Simplicial arrangements can be
turned into chamber complexes whose vertices are the extreme rays.
"""

from fractions import Fraction
from math import gcd

from .complexes import Complex
from .errors import (
    DegenerateNormal,
    NotSimplicial,
    RealizabilityFailure,
    ScaleExceeded,
)
from .reporting import Report

MAX_HYPERPLANES = 14
MAX_RANK = 5


# ---------------------------------------------------------------------------
# exact linear algebra helpers
# ---------------------------------------------------------------------------

def _dot(a, x):
    return sum(ai * xi for ai, xi in zip(a, x))


def _primitive(vec):
    """Scale an integer vector to coprime entries with positive leading
    sign; returns (representative, flip) with vec = flip * representative."""
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g == 0:
        raise DegenerateNormal("zero normal vector")
    out = tuple(v // g for v in vec)
    for v in out:
        if v > 0:
            return out, 1
        if v < 0:
            return tuple(-w for w in out), -1
    raise DegenerateNormal("zero normal vector")


def matrix_rank(rows):
    """Rank of an integer matrix, by fraction-free elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    cols = len(m[0])
    rank = 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def kernel_basis(rows, dim):
    """Integer basis of the common kernel {x : r.x = 0 for all rows}."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    rank = 0
    for col in range(dim):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [a / pv for a in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -m[r][fc]
        den = 1
        for v in vec:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in vec]
        basis.append(_primitive(ints)[0])
    return basis


def feasible_strict(rows, dim):
    """Does an x exist with r.x > 0 for every row?  Returns an integer
    witness point, or None.  Homogeneous strict Fourier-Motzkin."""
    if dim == 0:
        return None if rows else ()
    work = set()
    for r in rows:
        if all(v == 0 for v in r):
            return None
        work.add(_scale(r))
    remaining = list(range(dim))
    levels = []
    while remaining:
        best, best_cost = None, None
        for k in remaining:
            pos = sum(1 for r in work if r[k] > 0)
            neg = sum(1 for r in work if r[k] < 0)
            cost = pos * neg
            if best_cost is None or cost < best_cost:
                best, best_cost = k, cost
        k = best
        levels.append((k, list(work)))
        pos = [r for r in work if r[k] > 0]
        neg = [r for r in work if r[k] < 0]
        new = {r for r in work if r[k] == 0}
        for p in pos:
            for n in neg:
                comb = tuple(-n[k] * a + p[k] * b for a, b in zip(p, n))
                if all(v == 0 for v in comb):
                    return None
                new.add(_scale(comb))
        work = new
        remaining.remove(k)
    x = [None] * dim
    for k, lvl_rows in reversed(levels):
        lower, upper = None, None
        for r in lvl_rows:
            if r[k] == 0:
                continue
            rest = sum(r[i] * x[i] for i in range(dim)
                       if i != k and x[i] is not None)
            bound = Fraction(-rest, r[k])
            if r[k] > 0:
                lower = bound if lower is None else max(lower, bound)
            else:
                upper = bound if upper is None else min(upper, bound)
        if lower is not None and upper is not None:
            x[k] = (lower + upper) / 2
        elif lower is not None:
            x[k] = lower + 1
        elif upper is not None:
            x[k] = upper - 1
        else:
            x[k] = Fraction(0)
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    witness = tuple(int(v * den) for v in x)
    for r in rows:
        if _dot(r, witness) <= 0:
            raise RealizabilityFailure("elimination produced a bad witness")
    return witness


def _scale(vec):
    """Divide by the gcd of the entries, preserving orientation."""
    g = 0
    for v in vec:
        g = gcd(g, v)
    return tuple(v // g for v in vec)


def _sign(v):
    return (v > 0) - (v < 0)


def _generic_point(reps, dim):
    """Integer point off all the given hyperplanes, found on the moment
    curve (1, t, t^2, ...)."""
    t = 1
    while True:
        x = tuple(t ** i for i in range(dim))
        if all(_dot(r, x) != 0 for r in reps):
            return x
        t += 1


def _enumerate_chambers(reps, dim):
    """All chambers of a pairwise non-parallel arrangement, by wall
    crossings from a generic start point.

    Returns (chambers dict sign-tuple -> integer witness,
             walls dict sign-tuple -> frozenset of facet hyperplanes).
    """
    if not reps:
        return {(): _generic_point([], dim)}, {(): frozenset()}
    start = _generic_point(reps, dim)
    sig0 = tuple(_sign(_dot(r, start)) for r in reps)
    chambers = {sig0: start}
    walls = {}
    infeasible = set()
    queue = [sig0]
    sq = [_dot(r, r) for r in reps]
    while queue:
        sig = queue.pop()
        w = chambers[sig]
        found = set()
        for c, a in enumerate(reps):
            nb = sig[:c] + (-sig[c],) + sig[c + 1:]
            if nb in chambers:
                found.add(c)
                continue
            if nb in infeasible:
                continue
            # drop the witness onto the wall; if it stays strictly inside
            # every other halfspace the wall is a facet and we can step over
            aw = _dot(a, w)
            q = [sq[c] * wi - aw * ai for wi, ai in zip(w, a)]
            ok = all(_sign(_dot(reps[j], q)) == sig[j]
                     for j in range(len(reps)) if j != c)
            if ok:
                tau = None
                for j in range(len(reps)):
                    if j == c:
                        continue
                    drift = _dot(reps[j], a) * sig[c]
                    if drift:
                        cand = Fraction(abs(_dot(reps[j], q)), 2 * abs(drift))
                        tau = cand if tau is None else min(tau, cand)
                if tau is None:
                    tau = Fraction(1)
                point = [Fraction(qi) - tau * sig[c] * ai
                         for qi, ai in zip(q, a)]
                den = 1
                for v in point:
                    den = den * v.denominator // gcd(den, v.denominator)
                witness = tuple(int(v * den) for v in point)
            else:
                rows = [tuple(s * v for v in r) for s, r in zip(nb, reps)]
                witness = feasible_strict(rows, dim)
                if witness is None:
                    infeasible.add(nb)
                    continue
            found.add(c)
            chambers[nb] = witness
            queue.append(nb)
        walls[sig] = walls.get(sig, frozenset()) | found
    # crossing certifies the wall on both sides
    for sig, ws in list(walls.items()):
        for c in ws:
            nb = sig[:c] + (-sig[c],) + sig[c + 1:]
            walls[nb] = walls.get(nb, frozenset()) | {c}
    return chambers, walls


# ---------------------------------------------------------------------------
# the arrangement proper
# ---------------------------------------------------------------------------

def compose(x, y):
    return tuple(a if a else b for a, b in zip(x, y))


class Arrangement:
    """Finite set of linear hyperplanes given by nonzero, pairwise
    non-parallel integer normals."""

    def __init__(self, normals):
        normals = [tuple(int(v) for v in a) for a in normals]
        if not normals:
            raise DegenerateNormal("no hyperplanes")
        self.d = len(normals[0])
        if any(len(a) != self.d for a in normals):
            raise DegenerateNormal("normals of mixed dimension")
        if len(normals) > MAX_HYPERPLANES:
            raise ScaleExceeded(f"more than {MAX_HYPERPLANES} hyperplanes")
        reps = [_primitive(a)[0] for a in normals]
        if len(set(reps)) != len(reps):
            raise DegenerateNormal("parallel normals describe one hyperplane")
        self.normals = tuple(normals)
        self.rank = matrix_rank(normals)
        if self.rank > MAX_RANK:
            raise ScaleExceeded(f"rank above {MAX_RANK}")
        self.essential = self.rank == self.d
        self._cells = None       # sign tuple -> lattice rank of its zero flat
        self._walls = None
        self._chamber_list = None

    # ---- enumeration -----------------------------------------------------

    def _flats(self):
        """Closed hyperplane sets of the intersection lattice, with their
        matroid ranks."""
        m = len(self.normals)

        def closure(idx_set):
            rows = [self.normals[i] for i in idx_set]
            r = matrix_rank(rows)
            out = set(idx_set)
            for j in range(m):
                if j not in out and matrix_rank(rows + [self.normals[j]]) == r:
                    out.add(j)
            return frozenset(out), r

        flats = {}
        empty, _ = closure(set())
        flats[empty] = 0
        queue = [empty]
        while queue:
            s = queue.pop()
            for j in range(m):
                if j in s:
                    continue
                t, r = closure(s | {j})
                if t not in flats:
                    flats[t] = r
                    queue.append(t)
        return flats

    def _enumerate(self):
        if self._cells is not None:
            return
        cells = {}
        walls = {}
        for flat, frank in sorted(self._flats().items(),
                                  key=lambda kv: (kv[1], sorted(kv[0]))):
            basis = kernel_basis([self.normals[i] for i in flat], self.d)
            k = len(basis)
            outside = [j for j in range(len(self.normals)) if j not in flat]
            induced = {}
            for j in outside:
                vec = tuple(_dot(self.normals[j], b) for b in basis)
                rep, flip = _primitive(vec)
                induced.setdefault(rep, []).append((j, flip))
            reps = sorted(induced)
            sub, sub_walls = _enumerate_chambers(reps, k)
            for sig in sub:
                cov = [0] * len(self.normals)
                for rep, s in zip(reps, sig):
                    for j, flip in induced[rep]:
                        cov[j] = s * flip
                cov = tuple(cov)
                cells[cov] = self.rank - frank
                if frank == 0:
                    walls[cov] = frozenset(
                        induced[reps[c]][0][0] for c in sub_walls[sig])
        self._cells = cells
        self._walls = walls
        self._chamber_list = sorted(c for c, r in cells.items()
                                    if r == self.rank)

    @property
    def faces(self):
        """All covectors, sorted by band rank then sign tuple."""
        self._enumerate()
        return sorted(self._cells, key=lambda c: (self._cells[c], c))

    @property
    def chambers(self):
        self._enumerate()
        return list(self._chamber_list)

    def band_rank(self, cov):
        """Height of the covector's support in the intersection lattice
        (chambers sit at the top, the all-zero face at the bottom)."""
        self._enumerate()
        return self._cells[cov]

    def walls_of(self, chamber):
        """Facet-defining hyperplanes of a chamber."""
        self._enumerate()
        return self._walls[chamber]

    def face_token(self, cov):
        return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in cov)

    def parse_face(self, token):
        if len(token) != len(self.normals):
            raise RealizabilityFailure(
                f"sign vector {token!r} has wrong length")
        cov = tuple(1 if ch == "+" else -1 if ch == "-" else 0
                    for ch in token)
        self._enumerate()
        if cov not in self._cells:
            raise RealizabilityFailure(f"{token} is not a face")
        return cov

    # ---- band structure ---------------------------------------------------

    def product(self, x, y):
        self._enumerate()
        z = compose(x, y)
        if z not in self._cells:
            raise RealizabilityFailure(
                f"product {self.face_token(x)} * {self.face_token(y)} "
                f"is not realizable")
        return z

    def lrb(self):
        from .lrb import LRB
        faces = self.faces
        index = {f: i for i, f in enumerate(faces)}
        ranks = [self.band_rank(f) for f in faces]

        def prod(i, j):
            return index[self.product(faces[i], faces[j])]

        return LRB(len(faces), prod,
                   names=[self.face_token(f) for f in faces],
                   ranks=ranks)

    # ---- geometry checks ---------------------------------------------------

    def is_simplicial(self):
        """Every chamber cut out by exactly `rank` independent walls."""
        self._enumerate()
        for c in self._chamber_list:
            w = self._walls[c]
            if len(w) != self.rank:
                return False
            if matrix_rank([self.normals[i] for i in w]) != self.rank:
                return False
        return True

    def check_faces(self, products="auto"):
        """Euler relation over all faces and closure of the composition
        product (pairwise when the face count is modest)."""
        report = Report()
        self._enumerate()
        total = sum((-1) ** (self.rank - r) for r in self._cells.values())
        report.check("arrangement.euler", total == 1, f"sum={total}")
        faces = self.faces
        do_pairs = products == "all" or (products == "auto"
                                         and len(faces) <= 400)
        ok, witness = True, ()
        if do_pairs:
            for x in faces:
                for y in faces:
                    if compose(x, y) not in self._cells:
                        ok, witness = False, (self.face_token(x),
                                              self.face_token(y))
                        break
                if not ok:
                    break
            report.check("arrangement.product-closed", ok,
                         f"pairs={len(faces) ** 2}", *witness)
        else:
            for x in self._chamber_list:
                for y in faces:
                    if compose(y, x) not in self._cells:
                        ok, witness = False, (self.face_token(y),
                                              self.face_token(x))
                        break
            report.check("arrangement.product-closed", ok,
                         f"pairs={len(faces) * len(self._chamber_list)}",
                         "chamber-column-only", *witness)
        return report

    # ---- chamber complex ---------------------------------------------------

    def to_complex(self):
        """Chamber complex of a simplicial arrangement: vertices are the
        extreme rays, chambers list the rays they contain.  Vertex types
        are propagated along galleries when a consistent labelling
        exists; otherwise the complex is returned unlabelled."""
        self._enumerate()
        if not self.is_simplicial():
            raise NotSimplicial("chambers are not simplicial cones")
        rays = [f for f in self.faces if self._cells[f] == 1]
        ray_name = {f: f"r{i}" for i, f in enumerate(rays)}
        chambers = self.chambers
        members = []
        for c in chambers:
            mine = [r for r in rays if compose(r, c) == c]
            if len(mine) != self.rank:
                raise NotSimplicial(
                    f"chamber {self.face_token(c)} has {len(mine)} rays")
            members.append(mine)
        lists = [[ray_name[r] for r in mine] for mine in members]
        untyped = Complex(lists, chamber_names=[self.face_token(c)
                                                for c in chambers])
        types = self._propagate_types(untyped, lists)
        if types is None:
            return untyped
        return Complex(lists, types=types,
                       chamber_names=[self.face_token(c) for c in chambers])

    def _propagate_types(self, untyped, lists):
        assign = {}
        for i, v in enumerate(sorted(lists[0])):
            assign[v] = str(i)
        seen = {0}
        queue = [0]
        while queue:
            ci = queue.pop()
            here = set(lists[ci])
            for nb in untyped.adjacency[ci]:
                there = set(lists[nb])
                new = there - here
                if len(new) == 1:
                    (v,) = new
                    shared_types = {assign[u] for u in there & here
                                    if u in assign}
                    missing = set(str(i) for i in range(self.rank)) \
                        - shared_types
                    if len(missing) == 1:
                        want = missing.pop()
                        if v in assign and assign[v] != want:
                            return None
                        assign[v] = want
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        if len(assign) < len(untyped.vertex_names):
            return None
        for ch in lists:
            if len({assign[v] for v in ch}) != self.rank:
                return None
        return assign


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def _quotient_normal(a):
    """Express a sum-zero-space constraint in the basis e_k - e_(k+1)."""
    return tuple(a[k] - a[k + 1] for k in range(len(a) - 1))


def braid_arrangement(n):
    """Reflection arrangement x_i = x_j in the essential (sum-zero)
    quotient of R^n, coordinates in the basis e_k - e_(k+1)."""
    if n > 5:
        raise ScaleExceeded("braid arrangement capped at n = 5")
    normals = []
    for i in range(n):
        for j in range(i + 1, n):
            a = [0] * n
            a[i], a[j] = 1, -1
            normals.append(_quotient_normal(a))
    return Arrangement(normals)


def boolean_arrangement(n):
    """Coordinate hyperplanes x_i = 0."""
    if n > MAX_RANK:
        raise ScaleExceeded(f"boolean arrangement capped at n = {MAX_RANK}")
    return Arrangement([tuple(1 if j == i else 0 for j in range(n))
                        for i in range(n)])


def coxeter_arrangement(family, n):
    """Reflection arrangements of the classical families.

    A: x_i = x_j on the sum-zero quotient of R^n (so pass n = rank + 1);
    B: x_i = +-x_j and x_i = 0;  D: x_i = +-x_j only.
    The chamber count is asserted against the reflection group order.
    """
    family = family.upper()
    if family == "A":
        if n > 5:
            raise ScaleExceeded("type A capped at n = 5")
        arr = braid_arrangement(n)
        expected = 1
        for i in range(2, n + 1):
            expected *= i
    elif family in ("B", "D"):
        if n > 4:
            raise ScaleExceeded(f"type {family} capped at n = 4")
        normals = []
        for i in range(n):
            for j in range(i + 1, n):
                a = [0] * n
                a[i], a[j] = 1, -1
                normals.append(tuple(a))
                a[j] = 1
                normals.append(tuple(a))
        if family == "B":
            for i in range(n):
                normals.append(tuple(1 if j == i else 0 for j in range(n)))
        arr = Arrangement(normals)
        expected = 1
        for i in range(2, n + 1):
            expected *= i
        expected *= 2 ** (n if family == "B" else n - 1)
    else:
        raise ValueError(f"unknown family {family!r}")
    got = len(arr.chambers)
    if got != expected:
        raise RealizabilityFailure(
            f"type {family} rank {n} arrangement has {got} chambers, "
            f"expected {expected}")
    return arr


def generic_arrangement():
    """Four planes in general position in R^3 (a non-simplicial rank-3
    example with 14 chambers)."""
    return Arrangement([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
