"""Complete-flag complexes over small prime fields.

The vertex set consists of the proper nonzero subspaces of F_q^n, each
held in reduced row echelon form so that equality of subspaces is
equality of tuples.  Chambers are complete flags; the type of a vertex
is its dimension.  Frames (sets of n lines in general position) span
apartments, and the whole metric story — W-valued distances, opposite
chambers, retractions onto an apartment — is computed by direct
enumeration and cross-checked against the gallery metric of the
underlying complex.

The q-polynomial face counts live in `hq_polynomials`: every type set J
gets an integer polynomial whose value at the field size matches the
chamber count by restriction type, and whose coefficient sequence is the
reversal of the polynomial for the complementary type set.
"""

from fractions import Fraction
from itertools import combinations, permutations, product as iproduct
from math import comb, factorial

from .complexes import EMPTY_FACE, Complex, bits_of
from .errors import (
    NonPrimeField,
    NotInApartment,
    NotOpposite,
    OracleMismatch,
    ScaleExceeded,
)
from .flags import flag_vectors
from .reporting import Report

MAX_N = 4
MAX_Q = 3


# ---- prime field linear algebra ------------------------------------------

def _rref(rows, n, p):
    """Reduced row echelon form over F_p, nonzero rows only."""
    mat = [list(r) for r in rows]
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, len(mat)) if mat[r][col] % p), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = pow(mat[row][col], p - 2, p)
        mat[row] = [(x * inv) % p for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col] % p:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[row])]
        row += 1
        if row == len(mat):
            break
    return tuple(tuple(x % p for x in mat[r]) for r in range(row))


def _subspaces(n, k, p):
    """All k-dimensional subspaces of F_p^n as canonical echelon matrices.

    Enumerated by pivot columns and free entries, so every matrix comes
    out already reduced; sorted for a stable vertex order.
    """
    out = []
    for pivots in combinations(range(n), k):
        pivot_set = set(pivots)
        free = [(i, c) for i in range(k)
                for c in range(pivots[i] + 1, n) if c not in pivot_set]
        for vals in iproduct(range(p), repeat=len(free)):
            mat = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                mat[i][c] = 1
            for (i, c), v in zip(free, vals):
                mat[i][c] = v
            out.append(tuple(tuple(r) for r in mat))
    return tuple(sorted(out))


def _subspace_token(rows):
    if not rows:
        return "0"
    return ".".join("".join(str(x) for x in r) for r in rows)


def _vectors(rows, p):
    """All vectors in the row span, the zero vector included."""
    n = len(rows[0])
    out = []
    for coeffs in iproduct(range(p), repeat=len(rows)):
        out.append(tuple(sum(c * r[k] for c, r in zip(coeffs, rows)) % p
                         for k in range(n)))
    return out


def q_int(k, q):
    return sum(q ** i for i in range(k))


def q_factorial(n, q):
    out = 1
    for k in range(1, n + 1):
        out *= q_int(k, q)
    return out


def gaussian_binomial(n, k, q):
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    if num % den:
        raise OracleMismatch(f"gaussian binomial ({n},{k}) not integral")
    return num // den


def _is_prime(q):
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q ** 0.5) + 1))


# ---- permutation helpers ---------------------------------------------------

def inversions(perm):
    n = len(perm)
    return sum(1 for j in range(n) for k in range(j + 1, n)
               if perm[j] > perm[k])


def _compose(u, w):
    """(u ∘ w)(j) = u(w(j)) on one-indexed value tuples."""
    return tuple(u[w[j] - 1] for j in range(len(w)))


def descent_set(perm):
    return tuple(k for k in range(1, len(perm)) if perm[k - 1] > perm[k])


def descent_polynomials(n):
    """For each descent set J, the polynomial counting permutations with
    that descent set by inversion number."""
    top = comb(n, 2)
    table = {}
    for size in range(n):
        for J in combinations(range(1, n), size):
            table[J] = [0] * (top + 1)
    for w in permutations(range(1, n + 1)):
        table[descent_set(w)][inversions(w)] += 1
    return {J: IntPoly(v) for J, v in table.items()}


# ---- exact integer polynomials --------------------------------------------

class IntPoly:
    """Dense integer polynomial, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k, coeff=1):
        return cls((0,) * k + (coeff,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly(tuple(x + (b[i] if i < len(b) else 0)
                             for i, x in enumerate(a)))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def reversed_to_degree(self, n):
        """The polynomial x^n * p(1/x); requires degree at most n."""
        if self.degree > n:
            raise ValueError(f"degree {self.degree} exceeds {n}")
        cs = [0] * (n + 1)
        for k, c in enumerate(self.coeffs):
            cs[n - k] = c
        return IntPoly(cs)

    def render(self, var="q"):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{mag}{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"IntPoly({self.render()})"


# ---- the building -----------------------------------------------------------

class Building:
    """The flag complex of F_q^n with its frames and W-valued metric."""

    def __init__(self, n, q):
        self.n = n
        self.q = q
        self.by_dim = {k: _subspaces(n, k, q) for k in range(1, n)}
        for k, subs in self.by_dim.items():
            if len(subs) != gaussian_binomial(n, k, q):
                raise OracleMismatch(
                    f"{len(subs)} subspaces of dimension {k}, expected "
                    f"{gaussian_binomial(n, k, q)}")
        self.full = tuple(tuple(1 if i == j else 0 for j in range(n))
                          for i in range(n))

        flags = [(v,) for v in self.by_dim[1]]
        for k in range(2, n):
            flags = [fl + (w,) for fl in flags for w in self.by_dim[k]
                     if self._contains(w, fl[-1])]
        if len(flags) != q_factorial(n, q):
            raise OracleMismatch(
                f"{len(flags)} complete flags, expected {q_factorial(n, q)}")
        self.flags = tuple(flags)
        self.flag_index = {fl: i for i, fl in enumerate(flags)}

        types = {}
        for k, subs in self.by_dim.items():
            for v in subs:
                types[_subspace_token(v)] = str(k)
        names = ["<".join(_subspace_token(v) for v in fl) for fl in flags]
        self.complex = Complex(
            [[_subspace_token(v) for v in fl] for fl in flags],
            types=types, chamber_names=names)
        self.subspace_of_vertex = {
            _subspace_token(v): v for subs in self.by_dim.values() for v in subs}

        self._sum_dims = {}
        self._frames = None
        self._chamber_frames = None
        self._apartment_memo = {}

    def __repr__(self):
        return (f"Building(n={self.n}, q={self.q}, "
                f"chambers={len(self.flags)})")

    # ---- subspace relations ------------------------------------------

    def _contains(self, big, small):
        return len(_rref(big + small, self.n, self.q)) == len(big)

    def _sum_dim(self, a, b):
        key = (a, b)
        got = self._sum_dims.get(key)
        if got is None:
            got = len(_rref(a + b, self.n, self.q))
            self._sum_dims[key] = got
        return got

    def intersection_dim(self, a, b):
        return len(a) + len(b) - self._sum_dim(a, b)

    def intersection(self, a, b):
        """Canonical basis of the intersection, by scanning the smaller span."""
        if len(b) < len(a):
            a, b = b, a
        vecs = [v for v in _vectors(a, self.q)
                if any(v) and self._contains(b, (v,))]
        if not vecs:
            return ()
        return _rref(vecs, self.n, self.q)

    # ---- W-valued distance --------------------------------------------

    def w_distance(self, a, b):
        """The permutation recording how the two flags interleave; its
        inversion count is the gallery distance."""
        fa, fb = self.flags[a], self.flags[b]
        n = self.n

        def dim(i, j):
            if i == 0 or j == 0:
                return 0
            if i == n:
                return j
            if j == n:
                return i
            return self.intersection_dim(fa[i - 1], fb[j - 1])

        perm = []
        for j in range(1, n + 1):
            hit = None
            for i in range(1, n + 1):
                if (dim(i, j) - dim(i - 1, j)
                        - dim(i, j - 1) + dim(i - 1, j - 1)) == 1:
                    hit = i
                    break
            perm.append(hit)
        if sorted(perm) != list(range(1, n + 1)):
            raise OracleMismatch(
                f"flag interleaving of {self.complex.chamber_names[a]} and "
                f"{self.complex.chamber_names[b]} is not a permutation")
        return tuple(perm)

    @property
    def longest_element(self):
        return tuple(range(self.n, 0, -1))

    def is_opposite(self, a, b):
        return self.w_distance(a, b) == self.longest_element

    def opposite_chambers(self, a):
        """All chambers at maximal W-distance from a."""
        return tuple(d for d in range(len(self.flags))
                     if self.is_opposite(a, d))

    # ---- frames and apartments -----------------------------------------

    @property
    def frames(self):
        if self._frames is None:
            self._enumerate_frames()
        return self._frames

    def _enumerate_frames(self):
        lines = self.by_dim[1]
        frames = []
        for cand in combinations(lines, self.n):
            stacked = tuple(r for line in cand for r in line)
            if len(_rref(stacked, self.n, self.q)) == self.n:
                frames.append(cand)
        self._frames = tuple(frames)
        incidence = [set() for _ in self.flags]
        for fi, frame in enumerate(self._frames):
            for ci in self.apartment_chambers(frame):
                incidence[ci].add(fi)
        self._chamber_frames = tuple(frozenset(s) for s in incidence)

    def frame_count_formula(self):
        """Unordered bases up to scaling: |GL_n| / ((q-1)^n n!)."""
        n, q = self.n, self.q
        order = 1
        for i in range(n):
            order *= q ** n - q ** i
        return order // ((q - 1) ** n * factorial(n))

    def apartment_chambers(self, frame):
        """Chamber ids of the apartment spanned by a frame, sorted."""
        frame = tuple(sorted(frame))
        got = self._apartment_memo.get(frame)
        if got is not None:
            return got
        spans = {frozenset(): ()}
        for size in range(1, self.n):
            for sub in combinations(frame, size):
                key = frozenset(sub)
                prev = spans[frozenset(sub[:-1])]
                spans[key] = _rref(prev + sub[-1], self.n, self.q)
        out = set()
        for order in permutations(frame):
            fl = tuple(spans[frozenset(order[:i])] for i in range(1, self.n))
            ci = self.flag_index.get(fl)
            if ci is None:
                raise OracleMismatch(
                    "frame ordering did not produce a complete flag")
            out.add(ci)
        if len(out) != factorial(self.n):
            raise OracleMismatch(
                f"apartment has {len(out)} chambers, expected {factorial(self.n)}")
        result = tuple(sorted(out))
        self._apartment_memo[frame] = result
        return result

    def apartments_containing(self, ci):
        """Frame ids whose apartment holds the chamber."""
        if self._chamber_frames is None:
            self._enumerate_frames()
        return self._chamber_frames[ci]

    def apartments_containing_both(self, a, b):
        return self.apartments_containing(a) & self.apartments_containing(b)

    def frame_of_opposite_pair(self, a, b):
        """The frame whose apartment is the convex hull of an opposite pair:
        line i is the intersection of the i-th subspace of one flag with the
        (n-i+1)-th of the other."""
        if not self.is_opposite(a, b):
            raise NotOpposite(
                f"{self.complex.chamber_names[a]} and "
                f"{self.complex.chamber_names[b]} are not opposite")
        fa, fb = self.flags[a], self.flags[b]
        n = self.n
        lines = []
        for i in range(1, n + 1):
            va = self.full if i == n else fa[i - 1]
            vb = self.full if n + 1 - i == n else fb[n - i]
            line = self.intersection(va, vb)
            if len(line) != 1:
                raise OracleMismatch(
                    f"opposite-pair line {i} has dimension {len(line)}")
            lines.append(line)
        frame = tuple(sorted(lines))
        stacked = tuple(r for line in frame for r in line)
        if len(_rref(stacked, n, self.q)) != n:
            raise OracleMismatch("opposite-pair lines are not independent")
        return frame

    def standard_frame(self):
        coords = []
        for i in range(self.n):
            coords.append((tuple(1 if j == i else 0 for j in range(self.n)),))
        return tuple(sorted(coords))

    def standard_chamber(self):
        """The flag of coordinate prefixes e_1 < e_1,e_2 < ..."""
        fl = tuple(
            tuple(tuple(1 if j == i else 0 for j in range(self.n))
                  for i in range(k))
            for k in range(1, self.n))
        return self.flag_index[fl]

    def standard_opposite(self):
        """The flag of coordinate suffixes e_n < e_n,e_{n-1} < ..."""
        fl = []
        for k in range(1, self.n):
            rows = [tuple(1 if j == self.n - 1 - i else 0
                          for j in range(self.n)) for i in range(k)]
            fl.append(_rref(tuple(rows), self.n, self.q))
        return self.flag_index[tuple(fl)]

    def line_order(self, frame, ci):
        """The ordering the chamber's flag imposes on the frame lines."""
        fa = self.flags[ci] + (self.full,)
        rest = list(frame)
        out = []
        for sub in fa:
            here = [line for line in rest if self._contains(sub, line)]
            if len(here) != 1:
                raise NotInApartment(
                    f"{self.complex.chamber_names[ci]} does not refine the frame")
            out.append(here[0])
            rest.remove(here[0])
        return tuple(out)

    # ---- retraction ------------------------------------------------------

    def retraction_map(self, frame, base):
        """The retraction onto the frame's apartment centred at base, as a
        full chamber map.  Each chamber goes to the unique apartment chamber
        at the same W-distance from base."""
        apt = self.apartment_chambers(frame)
        if base not in apt:
            raise NotInApartment(
                f"{self.complex.chamber_names[base]} is not in the apartment")
        by_delta = {}
        for e in apt:
            delta = self.w_distance(base, e)
            if delta in by_delta:
                raise OracleMismatch("two apartment chambers share a distance")
            by_delta[delta] = e
        out = []
        for d in range(len(self.flags)):
            e = by_delta.get(self.w_distance(base, d))
            if e is None:
                raise OracleMismatch(
                    f"no apartment chamber matches the distance profile of "
                    f"{self.complex.chamber_names[d]}")
            out.append(e)
        return tuple(out)

    def retraction(self, frame, base, target):
        apt = self.apartment_chambers(frame)
        if base not in apt:
            raise NotInApartment(
                f"{self.complex.chamber_names[base]} is not in the apartment")
        want = self.w_distance(base, target)
        hits = [e for e in apt if self.w_distance(base, e) == want]
        if len(hits) != 1:
            raise OracleMismatch(
                f"{len(hits)} apartment chambers at distance {want}")
        return hits[0]

    def _face_of_type(self, ci, type_mask):
        c = self.complex
        m = 0
        for b in bits_of(c.chambers[ci]):
            if c.face_type_mask(1 << b) & type_mask:
                m |= 1 << b
        return m

    def retract_face(self, rho, face):
        """Image of a face under a retraction map, via any chamber above it;
        all chambers above it must agree."""
        c = self.complex
        tm = c.face_type_mask(face)
        out = None
        for ci in c.residue(face):
            img = self._face_of_type(rho[ci], tm)
            if out is None:
                out = img
            elif out != img:
                raise OracleMismatch(
                    f"retraction is not simplicial at {c.face_token(face)}")
        return out


def build_building(n, q):
    """The flag complex of F_q^n with frames, sized for exhaustive checks."""
    if not isinstance(q, int) or not _is_prime(q):
        raise NonPrimeField(f"q={q} is not a prime")
    if q > MAX_Q:
        raise ScaleExceeded(f"q={q} exceeds {MAX_Q}")
    if not 3 <= n <= MAX_N:
        raise ScaleExceeded(f"n={n} outside 3..{MAX_N}")
    return Building(n, q)


# ---- ordered set partitions: the apartment product oracle -------------------

def _partition_of_face(b, frame, face):
    """A face of the apartment as an ordered partition of the frame lines:
    block j holds the lines entering at the j-th subspace of the flag."""
    c = b.complex
    subs = sorted((b.subspace_of_vertex[c.vertex_names[bit]]
                   for bit in bits_of(face)), key=len)
    subs.append(b.full)
    rest = list(frame)
    blocks = []
    for sub in subs:
        blk = frozenset(line for line in rest if b._contains(sub, line))
        if not blk:
            raise NotInApartment("face does not refine the frame")
        blocks.append(blk)
        rest = [line for line in rest if line not in blk]
    if rest:
        raise NotInApartment("face does not exhaust the frame")
    return tuple(blocks)


def _partition_product(p, r):
    """Refinement product on ordered partitions: split each block of p
    along r, keeping p's block order first."""
    out = []
    for bp in p:
        for br in r:
            blk = bp & br
            if blk:
                out.append(blk)
    return tuple(out)


def _chamber_of_partition(b, blocks):
    """The chamber whose flag is the prefix spans of a singleton partition."""
    rows = ()
    fl = []
    for blk in blocks[:-1]:
        (line,) = blk
        rows = _rref(rows + line, b.n, b.q)
        fl.append(rows)
    return b.flag_index[tuple(fl)]


# ---- reports ----------------------------------------------------------------

def check_counts(b):
    """Chamber, vertex, frame and incidence counts, and the W-metric."""
    rep = Report()
    c = b.complex
    n, q = b.n, b.q
    nch = len(c.chambers)

    want = q_factorial(n, q)
    rep.check("building.chamber-count", nch == want,
              f"{nch} complete flags, [{n}]_{q}! = {want}")

    nv = len(c.vertex_names)
    want_v = sum(gaussian_binomial(n, k, q) for k in range(1, n))
    rep.check("building.vertex-count", nv == want_v,
              f"{nv} proper subspaces, expected {want_v}")

    bad = None
    for f in c.faces:
        if c.face_rank[f] == c.rank - 1 and len(c.residue(f)) != q + 1:
            bad = f
            break
    rep.check("building.facet-thickness", bad is None,
              f"every facet lies in q+1 = {q + 1} chambers" if bad is None
              else f"facet {c.face_token(bad)} lies in {len(c.residue(bad))}")

    frames = b.frames
    want_f = b.frame_count_formula()
    rep.check("building.apartment-count", len(frames) == want_f,
              f"{len(frames)} frames, |GL_{n}|/((q-1)^{n} {n}!) = {want_f}")

    per = q ** comb(n, 2)
    sizes = {len(b.apartments_containing(ci)) for ci in range(nch)}
    rep.check("building.apartments-per-chamber", sizes == {per},
              f"|A_C| = q^{comb(n, 2)} = {per} for every chamber"
              if sizes == {per} else f"sizes seen: {sorted(sizes)}")

    lhs = len(frames) * factorial(n)
    rhs = nch * per
    rep.check("building.incidence-consistency", lhs == rhs,
              f"{len(frames)}*{factorial(n)} = {nch}*{per} = {lhs}")

    frame = b.standard_frame()
    apt = b.apartment_chambers(frame)
    fid = frames.index(frame)
    rep.check("building.standard-frame-member",
              all(fid in b.apartments_containing(ci) for ci in apt),
              "the coordinate frame lies in A_C for each of its chambers")

    ident = tuple(range(1, n + 1))
    rep.check("distance.identity",
              all(b.w_distance(ci, ci) == ident for ci in range(nch)),
              "delta(C,C) = id")

    bad = None
    for a in range(nch):
        row = c.distances_from(a)
        for d in range(nch):
            if inversions(b.w_distance(a, d)) != row[d]:
                bad = (a, d)
                break
        if bad:
            break
    rep.check("distance.inversion-metric", bad is None,
              f"gallery distance = inversion count on all {nch * nch} pairs"
              if bad is None else
              f"pair {c.chamber_names[bad[0]]} / {c.chamber_names[bad[1]]}")

    base = b.standard_chamber()
    opp = b.standard_opposite()
    w0 = b.longest_element
    rep.check("distance.opposite-longest", b.w_distance(base, opp) == w0,
              f"delta = {b.w_distance(base, opp)}")

    ops = b.opposite_chambers(base)
    rep.check("building.opposite-count", len(ops) == per,
              f"|C^op| = {len(ops)}, q^{comb(n, 2)} = {per}")

    hulls = {}
    ok = True
    for e in ops:
        fr = b.frame_of_opposite_pair(base, e)
        if fr in hulls or frames.index(fr) not in b.apartments_containing(base):
            ok = False
            break
        hulls[fr] = e
    rep.check("building.opposite-apartment-bijection",
              ok and len(hulls) == len(b.apartments_containing(base)),
              f"{len(ops)} opposites map to {len(hulls)} distinct frames, "
              f"all containing C")
    return rep


def check_gate(b):
    """The gate property, cross-checked on an apartment against the
    refinement product of ordered partitions."""
    rep = Report()
    c = b.complex
    gr = c.check_gate_property()
    rep.check("building.gate-property", gr.passed,
              "every residue has a gate" if gr.passed
              else f"{gr.violation_count} violations")

    frame = b.standard_frame()
    apt = b.apartment_chambers(frame)
    faces = set()
    for ci in apt:
        m = c.chambers[ci]
        sub = m
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & m
    bad = None
    pairs = 0
    for face in sorted(faces):
        pf = _partition_of_face(b, frame, face)
        for ci in apt:
            pc = _partition_of_face(b, frame, c.chambers[ci])
            expect = _chamber_of_partition(b, _partition_product(pf, pc))
            if c.gate(face, ci) != expect:
                bad = (face, ci)
                break
            pairs += 1
        if bad:
            break
    rep.check("building.gate-vs-apartment-product", bad is None,
              f"gate agrees with the partition product on {pairs} pairs"
              if bad is None else
              f"face {c.face_token(bad[0])} chamber {c.chamber_names[bad[1]]}")
    return rep


def check_retraction(b, frame=None, base=None):
    """Retraction onto an apartment: fixes it, has q-power fibres, is
    simplicial, and commutes with projection to the centre."""
    rep = Report()
    c = b.complex
    n, q = b.n, b.q
    nch = len(c.chambers)
    if frame is None:
        frame = b.standard_frame()
    if base is None:
        base = b.standard_chamber()
    apt = b.apartment_chambers(frame)
    rho = b.retraction_map(frame, base)

    rep.check("retraction.well-defined", True,
              f"unique apartment chamber per distance profile, {nch} chambers")

    rep.check("retraction.fixes-apartment",
              all(rho[e] == e for e in apt),
              f"rho(D) = D on all {len(apt)} apartment chambers")

    fibres = {}
    for d in range(nch):
        fibres.setdefault(rho[d], []).append(d)
    sizes_ok = (set(fibres) == set(apt)
                and sum(len(v) for v in fibres.values()) == nch)
    bad = None
    for e, members in fibres.items():
        if len(members) != q ** inversions(b.w_distance(base, e)):
            bad = e
            break
    rep.check("retraction.fibre-partition", sizes_ok and bad is None,
              f"{len(fibres)} fibres of size q^inv partition {nch} chambers"
              if sizes_ok and bad is None else
              f"fibre of {c.chamber_names[bad]} has {len(fibres[bad])} members"
              if bad is not None else "fibres do not partition the chambers")

    w0 = b.longest_element
    opp = next(e for e in apt if b.w_distance(base, e) == w0)
    ops = set(b.opposite_chambers(base))
    rep.check("retraction.opposite-fibre",
              set(fibres[opp]) == ops and len(ops) == q ** comb(n, 2),
              f"fibre over the opposite chamber = C^op, {len(ops)} chambers")

    bad = None
    for face in c.faces:
        try:
            b.retract_face(rho, face)
        except OracleMismatch:
            bad = face
            break
    rep.check("retraction.simplicial", bad is None,
              f"face images agree across residues, {len(c.faces)} faces"
              if bad is None else f"face {c.face_token(bad)}")

    bad = None
    for face in c.faces:
        img = b.retract_face(rho, face)
        if c.gate(img, base) != rho[c.gate(face, base)]:
            bad = face
            break
    rep.check("retraction.projection-compatible", bad is None,
              "rho(F)C = rho(FC) on every face" if bad is None
              else f"face {c.face_token(bad)}")

    bad = None
    for d in range(nch):
        if b.retract_face(rho, c.descent_face(base, d)) != \
                c.descent_face(base, rho[d]):
            bad = d
            break
    rep.check("retraction.descent-compatible", bad is None,
              "rho(R_C(D)) = R_C(rho(D)) on every chamber" if bad is None
              else f"chamber {c.chamber_names[bad]}")
    return rep


def check_duality_lemma(b, base=None, opposite=None):
    """The apartment-count identity |A_{C,D}| |A_{D,Cbar}| = |A_D| over one
    apartment, the q-power formulas through the line order, and the
    constructive pair bijection behind the identity."""
    rep = Report()
    c = b.complex
    n, q = b.n, b.q
    if base is None:
        base = b.standard_chamber()
    if opposite is None:
        opposite = b.standard_opposite()
    if not b.is_opposite(base, opposite):
        raise NotOpposite(
            f"{c.chamber_names[base]} and {c.chamber_names[opposite]}")
    frame = b.frame_of_opposite_pair(base, opposite)
    apt = b.apartment_chambers(frame)
    frames = b.frames

    a_c = b.apartments_containing(base)
    a_cbar = b.apartments_containing(opposite)

    bad = None
    for d in apt:
        a_d = b.apartments_containing(d)
        if len(a_c & a_d) * len(a_d & a_cbar) != len(a_d):
            bad = d
            break
    rep.check("duality.product-identity", bad is None,
              f"|A_CD| |A_DCbar| = |A_D| for all {len(apt)} chambers"
              if bad is None else f"fails at {c.chamber_names[bad]}")

    ref = b.line_order(frame, base)
    pos = {line: i + 1 for i, line in enumerate(ref)}
    bad = None
    for d in apt:
        seq = [pos[line] for line in b.line_order(frame, d)]
        non = sum(1 for j in range(n) for k in range(j + 1, n)
                  if seq[j] < seq[k])
        inv = comb(n, 2) - non
        a_d = b.apartments_containing(d)
        if (len(a_c & a_d) != q ** non
                or len(a_d & a_cbar) != q ** inv):
            bad = d
            break
    rep.check("duality.inversion-formulas", bad is None,
              f"|A_CD| = q^noninv and |A_DCbar| = q^inv on all {len(apt)}"
              if bad is None else f"fails at {c.chamber_names[bad]}")

    bad = None
    u_and_w = []
    for d in apt:
        u = b.w_distance(base, d)
        w = b.w_distance(d, opposite)
        if (_compose(u, w) != b.longest_element
                or inversions(u) + inversions(w) != comb(n, 2)):
            bad = d
            break
        u_and_w.append((d, u, w))
    rep.check("duality.length-additive", bad is None,
              "delta(C,D) delta(D,Cbar) = w0 with additive lengths"
              if bad is None else f"fails at {c.chamber_names[bad]}")

    # Marker chambers: an apartment through C and D is pinned by the chamber
    # opposite C inside it, and likewise with Cbar in place of C.  Pairing a
    # C-marker with a Cbar-marker of the same D gives an opposite pair whose
    # hull is an apartment through D, and every apartment of A_D arises once.
    hull_c = {e: set(b.apartment_chambers(b.frame_of_opposite_pair(base, e)))
              for e in b.opposite_chambers(base)}
    hull_cbar = {e: set(b.apartment_chambers(b.frame_of_opposite_pair(opposite, e)))
                 for e in b.opposite_chambers(opposite)}

    bad = None
    for d in apt:
        markers = [e for e, members in hull_c.items() if d in members]
        if len(markers) != len(a_c & b.apartments_containing(d)):
            bad = d
            break
        if len({frames.index(b.frame_of_opposite_pair(base, e))
                for e in markers} - (a_c & b.apartments_containing(d))) != 0:
            bad = d
            break
    rep.check("duality.marker-bijection", bad is None,
              "apartments through C,D correspond to the chambers opposite C "
              "whose hull holds D" if bad is None else
              f"fails at {c.chamber_names[bad]}")

    bad = None
    checked = 0
    for d in apt:
        prime_cd = [e for e, members in hull_c.items() if d in members]
        prime_cbar_d = [e for e, members in hull_cbar.items() if d in members]
        a_d = b.apartments_containing(d)
        images = set()
        for e in prime_cd:
            for ebar in prime_cbar_d:
                if not b.is_opposite(ebar, e):
                    bad = d
                    break
                fr = b.frame_of_opposite_pair(ebar, e)
                fi = frames.index(fr)
                if fi not in a_d or fi in images:
                    bad = d
                    break
                images.add(fi)
                checked += 1
            if bad:
                break
        if bad or images != a_d:
            bad = bad or d
            break
    rep.check("duality.pair-bijection", bad is None,
              f"{checked} opposite marker pairs hit each apartment of A_D "
              f"exactly once" if bad is None else
              f"fails at {c.chamber_names[bad]}")

    full = c.full_type_mask
    r_opp = {d: c.face_type_mask(c.descent_face(opposite, d)) for d in apt}
    bad = None
    for d in apt:
        if c.face_type_mask(c.descent_face(base, d)) != full ^ r_opp[d]:
            bad = d
            break
    rep.check("duality.descent-complement", bad is None,
              "restriction types from C and Cbar are complementary on the "
              "apartment" if bad is None else f"fails at {c.chamber_names[bad]}")

    convex, witness = c.is_convex(apt)
    rep.check("duality.apartment-convex", convex,
              "the apartment is gallery convex" if convex else
              f"chamber {c.chamber_names[witness[1]]} slips between "
              f"{c.chamber_names[witness[0]]} and {c.chamber_names[witness[2]]}")
    return rep


def restriction_type_counts(b, base):
    """Chambers counted by the type of their restriction face from base."""
    c = b.complex
    out = {}
    for d in range(len(c.chambers)):
        tm = c.face_type_mask(c.descent_face(base, d))
        out[tm] = out.get(tm, 0) + 1
    return out


def hq_polynomials(b):
    """Descent-indexed q-polynomials with the coefficient-reversal duality.

    Returns (polys, report): polys maps each type subset (a tuple of
    dimensions) to its polynomial.  The report ties the polynomials to the
    built complex along every seam: restriction counts at the field size,
    Möbius inversion of the face counts, evaluation at 1 against a bare
    apartment, the fibre decomposition over one apartment, and the
    duality reversal both coefficient-wise and as exact evaluations.
    """
    rep = Report()
    c = b.complex
    n, q = b.n, b.q
    top = comb(n, 2)
    polys = descent_polynomials(n)

    def mask_of(J):
        m = 0
        for j in J:
            m |= 1 << c.labels.index(str(j))
        return m

    subsets = sorted(polys)
    base = b.standard_chamber()
    counts = restriction_type_counts(b, base)

    bad = None
    for J in subsets:
        if counts.get(mask_of(J), 0) != polys[J](q):
            bad = J
            break
    rep.check("hq.descent-oracle-match", bad is None,
              f"restriction counts at q={q} equal the descent polynomials"
              if bad is None else f"fails at J={set(bad) or '{}'}")

    other = restriction_type_counts(b, b.standard_opposite())
    rep.check("hq.base-independent", counts == other,
              "counts agree from two opposite base chambers")

    _f, h = flag_vectors(c)
    bad = None
    for J in subsets:
        if h[mask_of(J)] != counts.get(mask_of(J), 0):
            bad = J
            break
    rep.check("hq.flag-inversion-match", bad is None,
              "alternating sums of face counts equal the restriction counts"
              if bad is None else f"fails at J={set(bad) or '{}'}")

    full_J = tuple(range(1, n))
    rep.check("hq.top-coefficient",
              polys[full_J] == IntPoly.monomial(top),
              f"h_I = q^{top}")

    bad = None
    for J in subsets:
        comp = tuple(j for j in full_J if j not in J)
        if polys[J] != polys[comp].reversed_to_degree(top):
            bad = J
            break
    rep.check("hq.duality-coefficients", bad is None,
              f"h_J = q^{top} h_(I-J)(1/q) coefficient-wise for all "
              f"{len(subsets)} subsets" if bad is None else
              f"fails at J={set(bad) or '{}'}")

    x = Fraction(q)
    bad = None
    for J in subsets:
        comp = tuple(j for j in full_J if j not in J)
        if polys[J](x) != x ** top * polys[comp](1 / x):
            bad = J
            break
    rep.check("hq.duality-evaluations", bad is None,
              f"exact Laurent evaluation at q={q}" if bad is None else
              f"fails at J={set(bad) or '{}'}")

    frame = b.standard_frame()
    apt = b.apartment_chambers(frame)
    apt_complex = Complex(
        [[c.vertex_names[bit] for bit in bits_of(c.chambers[e])] for e in apt],
        types={c.vertex_names[bit]: c.types[bit]
               for e in apt for bit in bits_of(c.chambers[e])})
    if apt_complex.labels != c.labels:
        raise OracleMismatch("apartment labels differ from the building's")
    _af, ah = flag_vectors(apt_complex)
    bad = None
    for J in subsets:
        if polys[J](1) != ah[mask_of(J)]:
            bad = J
            break
    rep.check("hq.apartment-at-one", bad is None,
              "h_J(1) equals the flag h of a bare apartment"
              if bad is None else f"fails at J={set(bad) or '{}'}")

    name_of = {}
    for e in apt:
        names = frozenset(c.vertex_names[bit]
                          for bit in bits_of(c.chambers[e]))
        name_of[names] = e
    to_building = [
        name_of[frozenset(apt_complex.vertex_names[bit] for bit in bits_of(m))]
        for m in apt_complex.chambers]
    sub_base = to_building.index(base)
    bad = None
    for i, e in enumerate(to_building):
        want = apt_complex.face_token(apt_complex.descent_face(sub_base, i))
        got = c.face_token(c.descent_face(base, e))
        if want != got:
            bad = e
            break
    rep.check("hq.restriction-restricts", bad is None,
              "the building restriction map restricted to the apartment is "
              "the apartment's" if bad is None else
              f"fails at {c.chamber_names[bad]}")

    bad = None
    for J in subsets:
        m = mask_of(J)
        total = sum(q ** inversions(b.w_distance(base, d))
                    for d in apt
                    if c.face_type_mask(c.descent_face(base, d)) == m)
        if total != polys[J](q):
            bad = J
            break
    rep.check("hq.fibre-decomposition", bad is None,
              "h_J(q) = sum of q^inv over the apartment chambers of "
              "restriction type J" if bad is None else
              f"fails at J={set(bad) or '{}'}")
    return polys, rep


def render_hq_table(polys):
    """Lines like `h[{1,3}] = q^2 + q^3 + 2q^4 + q^5`, subsets in size order."""
    out = []
    for J in sorted(polys, key=lambda t: (len(t), t)):
        label = "{" + ",".join(str(j) for j in J) + "}"
        out.append(f"h[{label}] = {polys[J].render()}")
    return out
