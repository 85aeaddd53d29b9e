"""Sums over rank classes, their commutation, and face random walks.

For a graded band, sigma_k denotes the formal sum of the rank-k
elements; the product sigma_i sigma_j expands to a multiset of elements
and the interesting question is whether the two orders agree.  On the
chamber coefficients this is exactly the condition that drives the
random walk: pick a face F with probability w(F), move from chamber C
to F.C.  The stationary distribution of that walk is uniform precisely
when the top sum commutes with the chosen rank sum, and the walk
routines assert that equivalence whenever it applies.

Everything is exact: transition matrices hold fractions, stationary
distributions come out of Gaussian elimination, and a tie is a tie.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    FormatError,
    OracleMismatch,
    RankMismatch,
    ReducibleChain,
)
from .reporting import Report


# ---------------------------------------------------------------------------
# rank-class sums
# ---------------------------------------------------------------------------

def sigma_product(band, i, j):
    """Coefficients of sigma_i sigma_j as a dict element -> multiplicity."""
    out = {}
    prod = band.prod
    for f in band.rank_class(i):
        for g in band.rank_class(j):
            z = prod(f, g)
            out[z] = out.get(z, 0) + 1
    return out


def commutes(band, i, j):
    return sigma_product(band, i, j) == sigma_product(band, j, i)


def check_commutativity(band, pairs=None):
    """One line per rank pair i < j comparing the two product orders."""
    report = Report()
    top = band.top_rank
    if pairs is None:
        pairs = [(i, j) for i in range(1, top + 1)
                 for j in range(i + 1, top + 1)]
    for i, j in pairs:
        d1 = sigma_product(band, i, j)
        d2 = sigma_product(band, j, i)
        witness = ()
        if d1 != d2:
            x = next(k for k in sorted(set(d1) | set(d2))
                     if d1.get(k, 0) != d2.get(k, 0))
            witness = (band.names[x],
                       f"{d1.get(x, 0)}!={d2.get(x, 0)}")
        report.check(f"commutation.{i}-{j}", d1 == d2, *witness)
    return report


def check_uniformity(band):
    """Chamber-coefficient uniformity of every sigma_i sigma_j, tested on
    each lower band S_<=X, plus the implication to full commutation."""
    report = Report()
    band.ranks
    members, _, _ = band.support_classes()
    top = band.top_class()
    all_uniform = True
    for a, cls in enumerate(members):
        sub = band if a == top else band.sub_band(cls[0])
        chs = sub.chambers()
        ok, witness = True, ()
        for i in range(1, sub.top_rank + 1):
            for j in range(1, sub.top_rank + 1):
                coeffs = sigma_product(sub, i, j)
                vals = {coeffs.get(d, 0) for d in chs}
                if len(vals) > 1:
                    ok, witness = False, (f"i={i}", f"j={j}",
                                          f"values={sorted(vals)}")
                    break
            if not ok:
                break
        report.check(f"uniformity.{band.names[cls[0]]}", ok, *witness)
        all_uniform = all_uniform and ok
    comm_ok = check_commutativity(band).ok
    report.check("uniformity.implies-commutation",
                 (not all_uniform) or comm_ok,
                 "premise-holds" if all_uniform else "vacuous")
    return report


# ---------------------------------------------------------------------------
# labelled sums on a complex with a projection table
# ---------------------------------------------------------------------------

def type_sigma_coefficients(c, p, type_mask):
    """Chamber coefficients of (sum of faces of the given type) acting on
    the sum of all chambers through the projection table."""
    faces = [f for f in c.faces if c.face_type_mask(f) == type_mask]
    coeffs = {d: 0 for d in range(len(c.chambers))}
    for f in faces:
        for ci in range(len(c.chambers)):
            coeffs[p.table[(f, ci)]] += 1
    return coeffs, len(faces)


def check_type_commutativity(c, p, r=None):
    """For each type set J: acting with the type-J faces on the chamber
    sum commutes with the reverse order exactly when every chamber
    coefficient equals the number of type-J faces.  When a restriction
    family is supplied the coefficients are re-derived from it as an
    independent route and any disagreement raises."""
    from .flags import local_flag_table
    report = Report()
    full = c.full_type_mask
    f_local = None
    if r is not None:
        f_local = local_flag_table(c, r.table)[1]
    for j in range(full + 1):
        coeffs, nfaces = type_sigma_coefficients(c, p, j)
        if f_local is not None:
            for d, got in coeffs.items():
                if got != f_local[(d, j)]:
                    raise OracleMismatch(
                        f"type {c.type_token(j)} coefficients disagree "
                        f"with the restriction table at "
                        f"{c.chamber_names[d]}")
        bad = next((d for d in sorted(coeffs) if coeffs[d] != nfaces), None)
        report.check(f"commutation.type-{c.type_token(j)}", bad is None,
                     *(() if bad is None else
                       (c.chamber_names[bad], f"{coeffs[bad]}!={nfaces}")))
    return report


# ---------------------------------------------------------------------------
# walks
# ---------------------------------------------------------------------------

@dataclass
class WalkResult:
    states: list          # state names, fixed order
    matrix: list          # rows of Fractions, indexed like states
    stationary: list      # Fractions summing to one
    terminal: tuple       # indices of the recurrent class

    @property
    def uniform(self):
        return len(set(self.stationary)) == 1

    def render(self, fmt="text"):
        lines = []
        for name, p in zip(self.states, self.stationary):
            if fmt == "tsv":
                lines.append(f"pi\t{name}\t{p}")
            else:
                lines.append(f"pi {name} = {p}")
        return "\n".join(lines)


def _terminal_classes(matrix):
    """Strongly connected components with no outgoing edge, in the
    digraph of positive transition entries."""
    n = len(matrix)
    adj = [[t for t in range(n) if matrix[s][t] > 0] for s in range(n)]
    order = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        stack = [(s, iter(adj[s]))]
        seen[s] = True
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                order.append(v)
                stack.pop()
    radj = [[] for _ in range(n)]
    for s in range(n):
        for t in adj[s]:
            radj[t].append(s)
    comp = [None] * n
    ncomp = 0
    for s in reversed(order):
        if comp[s] is not None:
            continue
        stack = [s]
        comp[s] = ncomp
        while stack:
            v = stack.pop()
            for w in radj[v]:
                if comp[w] is None:
                    comp[w] = ncomp
                    stack.append(w)
        ncomp += 1
    outgoing = [False] * ncomp
    for s in range(n):
        for t in adj[s]:
            if comp[s] != comp[t]:
                outgoing[comp[s]] = True
    return [[s for s in range(n) if comp[s] == k]
            for k in range(ncomp) if not outgoing[k]]


def stationary_distribution(matrix, names):
    """Exact stationary distribution; unique only when a single
    recurrent class exists, otherwise the decomposition is raised."""
    terminals = _terminal_classes(matrix)
    if len(terminals) != 1:
        raise ReducibleChain(
            f"{len(terminals)} recurrent classes",
            classes=[[names[s] for s in t] for t in terminals])
    T = sorted(terminals[0])
    k = len(T)
    # balance equations pi P = pi on the recurrent class, one replaced
    # by the normalisation sum pi = 1
    rows = []
    for col in range(k - 1):
        t = T[col]
        row = [matrix[s][t] - (1 if s == t else 0) for s in T]
        row.append(Fraction(0))
        rows.append(row)
    rows.append([Fraction(1)] * k + [Fraction(1)])
    for col in range(k):
        piv = next((r for r in range(col, k) if rows[r][col]), None)
        if piv is None:
            raise OracleMismatch("singular balance system")
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [v / pv for v in rows[col]]
        for r in range(k):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    pi_T = [rows[r][k] for r in range(k)]
    if any(p < 0 for p in pi_T) or sum(pi_T) != 1:
        raise OracleMismatch("stationary solve left an invalid distribution")
    pi = [Fraction(0)] * len(names)
    for idx, t in enumerate(T):
        pi[t] = pi_T[idx]
    return pi, tuple(T)


def _check_weights(weights, total_needed=True):
    if not weights:
        raise FormatError("no weights given")
    total = Fraction(0)
    for w in weights.values():
        w = Fraction(w)
        if w < 0:
            raise FormatError("negative weight")
        total += w
    if total_needed and total != 1:
        raise FormatError(f"weights sum to {total}, not 1")


def walk_band(band, weights):
    """Face walk on a band: from chamber C, pick x with probability
    w(x) and move to x.C.  If the weights are uniform over one rank
    class the uniform-iff-commutation theorem is asserted."""
    _check_weights(weights)
    chs = band.chambers()
    index = {s: i for i, s in enumerate(chs)}
    names = [band.names[s] for s in chs]
    n = len(chs)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for x, w in sorted(weights.items()):
        if w == 0:
            continue
        for si, s in enumerate(chs):
            matrix[si][index[band.prod(x, s)]] += Fraction(w)
    pi, terminal = stationary_distribution(matrix, names)
    result = WalkResult(names, matrix, pi, terminal)
    j = _uniform_rank_of(band, weights)
    if j is not None:
        want = commutes(band, band.top_rank, j)
        if result.uniform != want:
            raise OracleMismatch(
                f"uniform stationary is {result.uniform} but the rank-"
                f"{j} sum {'commutes' if want else 'does not commute'} "
                f"with the chamber sum")
    return result


def _uniform_rank_of(band, weights):
    support = sorted(x for x, w in weights.items() if w != 0)
    vals = {Fraction(w) for w in weights.values() if w != 0}
    if len(vals) != 1:
        return None
    for j in range(1, band.top_rank + 1):
        if support == sorted(band.rank_class(j)):
            return j
    return None


def walk_complex(c, p, weights):
    """Face walk on a complex through its projection table; weights are
    keyed by face mask.  Uniform weights on a single type class trigger
    the labelled commutation assertion."""
    _check_weights(weights)
    nch = len(c.chambers)
    matrix = [[Fraction(0)] * nch for _ in range(nch)]
    for f, w in sorted(weights.items()):
        if w == 0:
            continue
        if f not in c.face_rank:
            raise FormatError(f"weight on a non-face {c.face_token(f)}")
        for s in range(nch):
            matrix[s][p.table[(f, s)]] += Fraction(w)
    pi, terminal = stationary_distribution(matrix, list(c.chamber_names))
    result = WalkResult(list(c.chamber_names), matrix, pi, terminal)
    j = _uniform_type_of(c, weights)
    if j is not None:
        coeffs, nfaces = type_sigma_coefficients(c, p, j)
        want = all(v == nfaces for v in coeffs.values())
        if result.uniform != want:
            raise OracleMismatch(
                f"uniform stationary is {result.uniform} but the type-"
                f"{c.type_token(j)} sum "
                f"{'commutes' if want else 'does not commute'} "
                f"with the chamber sum")
    return result


def _uniform_type_of(c, weights):
    if c.types is None:
        return None
    support = sorted(f for f, w in weights.items() if w != 0)
    vals = {Fraction(w) for w in weights.values() if w != 0}
    if len(vals) != 1:
        return None
    for j in range(c.full_type_mask + 1):
        if support == sorted(f for f in c.faces
                             if c.face_type_mask(f) == j):
            return j
    return None


def uniform_rank_weights(band, j):
    cls = band.rank_class(j)
    if not cls:
        raise RankMismatch(f"no elements of rank {j}")
    w = Fraction(1, len(cls))
    return {x: w for x in cls}


def uniform_type_weights(c, type_mask):
    faces = [f for f in c.faces if c.face_type_mask(f) == type_mask]
    if not faces:
        token = (c.type_token(type_mask)
                 if type_mask & ~c.full_type_mask == 0 else str(type_mask))
        raise RankMismatch(f"no faces of type {token}")
    w = Fraction(1, len(faces))
    return {f: w for f in faces}


# ---------------------------------------------------------------------------
# the rank-3 picture
# ---------------------------------------------------------------------------

def rank3_harness(arrangement):
    """For a rank-3 arrangement the three commutation conditions and
    simpliciality stand or fall together, and the vertex walk is uniform
    in exactly the same cases.  Reports each verdict and raises if the
    equivalence itself breaks."""
    if arrangement.rank != 3:
        raise RankMismatch(
            f"rank-3 harness on a rank-{arrangement.rank} arrangement")
    band = arrangement.lrb()
    report = Report()
    simplicial = arrangement.is_simplicial()
    report.check("rank3.simplicial", simplicial)
    verdicts = {"simplicial": simplicial}
    for i, j in ((1, 2), (1, 3), (2, 3)):
        v = commutes(band, i, j)
        verdicts[f"c{i}{j}"] = v
        report.check(f"rank3.commutation-{i}-{j}", v)
    try:
        result = walk_band(band, uniform_rank_weights(band, 1))
        verdicts["walk-uniform"] = result.uniform
        report.check("rank3.walk-uniform", result.uniform)
    except ReducibleChain as exc:
        verdicts["walk-uniform"] = None
        report.check("rank3.walk-uniform", False, f"reducible: {exc}")
    agree = len({v for v in verdicts.values() if v is not None}) == 1
    witness = " ".join(f"{k}={v}" for k, v in sorted(verdicts.items()))
    if not agree:
        raise OracleMismatch(f"rank-3 equivalence broken: {witness}")
    report.check("rank3.equivalence", True, witness)
    return report
