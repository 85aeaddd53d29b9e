"""Face counting: flag f and h vectors, per-chamber tables, duality
equalities between complementary entries, and skeleton sphere counts.

The labelled vectors are indexed by type-set bitmasks over the sorted
label tuple of the complex; the unlabelled ones by rank.  Both h
variants are obtained by exact integer inversion of their defining
triangular relations, and the round trips are asserted.
"""

from math import comb

from .complexes import bits_of, submasks
from .errors import EulerMismatch, NeedsLabels, OracleMismatch
from .reporting import Report


def binom(a, b):
    if b == 0:
        return 1
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def flag_vectors(c):
    """Labelled face counts (f) and their alternating-sum inversion (h),
    one integer per type subset."""
    if c.types is None:
        raise NeedsLabels("flag vectors need vertex types")
    full = c.full_type_mask
    f = {j: 0 for j in range(full + 1)}
    for face in c.faces:
        f[c.face_type_mask(face)] += 1
    h = {}
    for j in range(full + 1):
        total = 0
        for k in submasks(j):
            sign = -1 if (j ^ k).bit_count() % 2 else 1
            total += sign * f[k]
        h[j] = total
    for j in range(full + 1):
        if f[j] != sum(h[k] for k in submasks(j)):
            raise OracleMismatch(f"flag inversion fails at {c.type_token(j)}")
    return f, h


def rank_vectors(c):
    """Unlabelled face counts by rank and the h vector solving
    f_j = sum_k binom(n-k, n-j) h_k."""
    n = c.rank
    f = [0] * (n + 1)
    for face in c.faces:
        f[c.face_rank[face]] += 1
    h = [0] * (n + 1)
    for j in range(n + 1):
        h[j] = f[j] - sum(binom(n - k, n - j) * h[k] for k in range(j))
    for j in range(n + 1):
        if f[j] != sum(binom(n - k, n - j) * h[k] for k in range(j + 1)):
            raise OracleMismatch(f"rank inversion fails at {j}")
    return f, h


def beta_vector(c, restriction):
    """Counts of chambers by the type of their restriction face.

    restriction maps every chamber id to a face mask (one column of a
    restriction family, or a shelling certificate's map).
    """
    if c.types is None:
        raise NeedsLabels("typed beta counts need vertex types")
    full = c.full_type_mask
    beta = {j: 0 for j in range(full + 1)}
    for ci in range(len(c.chambers)):
        beta[c.face_type_mask(restriction[ci])] += 1
    return beta


def beta_ranks(c, restriction):
    """Counts of chambers by the rank of their restriction face."""
    out = [0] * (c.rank + 1)
    for ci in range(len(c.chambers)):
        out[restriction[ci].bit_count()] += 1
    return out


def local_flag_table(c, family_table):
    """Per-chamber h and f tables from a full restriction family.

    family_table maps (c_id, d_id) to the restriction face of d as seen
    from c.  h_J(D) counts the base chambers whose restriction of D has
    type J; f accumulates h over subsets.  The row sums and the averaging
    identities against the global vectors are asserted.
    """
    if c.types is None:
        raise NeedsLabels("local flag tables need vertex types")
    nch = len(c.chambers)
    full = c.full_type_mask
    h_local = {(d, j): 0 for d in range(nch) for j in range(full + 1)}
    for (ci, d), face in family_table.items():
        h_local[(d, c.face_type_mask(face))] += 1
    f_local = {}
    for d in range(nch):
        if sum(h_local[(d, j)] for j in range(full + 1)) != nch:
            raise OracleMismatch(
                f"local h row of {c.chamber_names[d]} does not sum to the "
                f"chamber count")
        for j in range(full + 1):
            f_local[(d, j)] = sum(h_local[(d, k)] for k in submasks(j))
    _f, h_global = flag_vectors(c)
    for j in range(full + 1):
        if sum(h_local[(d, j)] for d in range(nch)) != nch * h_global[j]:
            raise OracleMismatch(
                f"averaging fails for type {c.type_token(j)}")
        if sum(f_local[(d, j)] for d in range(nch)) != nch * _f[j]:
            raise OracleMismatch(
                f"averaging fails for f at type {c.type_token(j)}")
    return h_local, f_local


def ds_report(c, h):
    """PASS/FAIL line per complementary pair of type subsets."""
    full = c.full_type_mask
    report = Report()
    for j in range(full + 1):
        k = full ^ j
        if j > k:
            continue
        report.check(f"ds.{c.type_token(j)}~{c.type_token(k)}",
                     h[j] == h[k], h[j], h[k])
    return report


def ds_report_ranks(h):
    """Unlabelled variant: h_j against h_(n-j)."""
    n = len(h) - 1
    report = Report()
    for j in range(n + 1):
        if j > n - j:
            continue
        report.check(f"ds.{j}~{n - j}", h[j] == h[n - j], h[j], h[n - j])
    return report


def skeleton_sphere_count(c, beta, k):
    """Predicted number of spheres wedged in the rank-at-most-k skeleton,
    cross-checked against the skeleton's reduced Euler characteristic."""
    n = c.rank
    if not 0 <= k <= n:
        raise ValueError(f"skeleton rank {k} out of range")
    value = sum(binom(n - i - 1, k - i) * beta[i] for i in range(k + 1))
    chi = c.euler_reduced(max_rank=k)
    sign = -1 if k % 2 == 0 else 1
    if chi != sign * value:
        raise EulerMismatch(
            f"rank-{k} skeleton has reduced Euler characteristic {chi}, "
            f"sphere count predicts {sign * value}")
    return value
