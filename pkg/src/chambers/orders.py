"""Finite partial orders on chamber sets, stored as closure bitmatrices.

Row i is an integer whose bit j says i <= j.  Construction from a
generating relation computes the reflexive-transitive closure and
rejects cycles with a shortest concrete witness, because downstream
code is never allowed to tie-break its way past a broken order.
"""

from collections import deque
from itertools import islice

from .errors import NotAPartialOrder


class PartialOrder:

    def __init__(self, n, rows, pairs=None):
        self.n = n
        self.rows = tuple(rows)
        self.pairs = tuple(pairs) if pairs is not None else None
        if len(self.rows) != n:
            raise ValueError("one row per element required")
        full = (1 << n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError("row mentions elements out of range")
            if not (row >> i) & 1:
                raise ValueError(f"order is not reflexive at {i}")
        self._assert_antisymmetric()
        self._assert_transitive()
        self._down = None

    @classmethod
    def from_pairs(cls, n, pairs, what="order"):
        rows = [1 << i for i in range(n)]
        for a, b in pairs:
            rows[a] |= 1 << b
        # Warshall closure on bitmask rows
        for k in range(n):
            rk = rows[k]
            bit = 1 << k
            for i in range(n):
                if rows[i] & bit:
                    rows[i] |= rk
        for i in range(n):
            others = rows[i] & ~(1 << i)
            while others:
                low = others & -others
                j = low.bit_length() - 1
                others ^= low
                if (rows[j] >> i) & 1:
                    cycle = _shortest_cycle(n, pairs, i)
                    raise NotAPartialOrder(
                        f"{what} has a cycle through elements {cycle}",
                        cycle=cycle)
        return cls(n, rows, pairs=tuple(pairs))

    def _assert_antisymmetric(self):
        for i in range(self.n):
            others = self.rows[i] & ~(1 << i)
            while others:
                low = others & -others
                j = low.bit_length() - 1
                others ^= low
                if (self.rows[j] >> i) & 1:
                    raise NotAPartialOrder(
                        f"elements {i} and {j} are mutually comparable",
                        cycle=(i, j, i))

    def _assert_transitive(self):
        for i in range(self.n):
            acc = self.rows[i]
            row = acc
            while row:
                low = row & -row
                row ^= low
                acc |= self.rows[low.bit_length() - 1]
            if acc != self.rows[i]:
                raise ValueError(f"rows are not transitively closed at {i}")

    # ---- queries ---------------------------------------------------------

    def leq(self, a, b):
        return bool((self.rows[a] >> b) & 1)

    def up_mask(self, a):
        return self.rows[a]

    def down_masks(self):
        if self._down is None:
            down = [0] * self.n
            for i in range(self.n):
                row = self.rows[i]
                while row:
                    low = row & -row
                    row ^= low
                    down[low.bit_length() - 1] |= 1 << i
            self._down = down
        return self._down

    def minima(self, elements):
        elems = list(elements)
        out = []
        for x in elems:
            if all(x == y or not self.leq(y, x) for y in elems):
                out.append(x)
        return out

    def is_total(self):
        want = self.n * (self.n + 1) // 2
        return sum(r.bit_count() for r in self.rows) == want

    def covers(self):
        """Cover pairs (a, b): a < b with nothing strictly between."""
        out = []
        down = self.down_masks()
        for a in range(self.n):
            strict = self.rows[a] & ~(1 << a)
            row = strict
            while row:
                low = row & -row
                b = low.bit_length() - 1
                row ^= low
                if strict & down[b] & ~low == 0:
                    out.append((a, b))
        return out

    def strict_pairs(self):
        out = []
        for a in range(self.n):
            row = self.rows[a] & ~(1 << a)
            while row:
                low = row & -row
                row ^= low
                out.append((a, low.bit_length() - 1))
        return out

    # ---- linear extensions -------------------------------------------------

    def linear_extensions(self):
        """Yield every linear extension, lexicographically by element index."""
        n = self.n
        down = self.down_masks()
        strict_down = [down[x] & ~(1 << x) for x in range(n)]
        full = (1 << n) - 1

        def rec(placed, acc):
            if placed == full:
                yield tuple(acc)
                return
            for x in range(n):
                bit = 1 << x
                if placed & bit:
                    continue
                if strict_down[x] & ~placed:
                    continue
                acc.append(x)
                yield from rec(placed | bit, acc)
                acc.pop()

        yield from rec(0, [])

    def count_linear_extensions(self, cap):
        """Exact count when at most cap, else None."""
        n = 0
        for _ in islice(self.linear_extensions(), cap + 1):
            n += 1
        return None if n > cap else n

    def random_extension(self, rng):
        """A random linear extension (uniform choice among currently minimal
        elements at each step; not uniform over all extensions)."""
        n = self.n
        down = self.down_masks()
        strict_down = [down[x] & ~(1 << x) for x in range(n)]
        placed = 0
        acc = []
        while len(acc) < n:
            avail = [x for x in range(n)
                     if not (placed >> x) & 1 and not (strict_down[x] & ~placed)]
            x = rng.choice(avail)
            acc.append(x)
            placed |= 1 << x
        return tuple(acc)

    def reverse(self):
        cols = [0] * self.n
        for i in range(self.n):
            row = self.rows[i]
            while row:
                low = row & -row
                row ^= low
                cols[low.bit_length() - 1] |= 1 << i
        return PartialOrder(self.n, cols)

    def __eq__(self, other):
        return isinstance(other, PartialOrder) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"PartialOrder(n={self.n}, relations={sum(r.bit_count() for r in self.rows)})"


def _shortest_cycle(n, pairs, start):
    """Shortest generating-relation cycle through start, as a node tuple
    beginning and ending at start."""
    succ = [set() for _ in range(n)]
    for a, b in pairs:
        if a != b:
            succ[a].add(b)
    if start in succ[start]:
        return (start, start)
    prev = {}
    frontier = deque()
    for y in sorted(succ[start]):
        prev.setdefault(y, start)
        frontier.append(y)
    while frontier:
        x = frontier.popleft()
        if start in succ[x]:
            path = [x]
            while path[-1] != start:
                path.append(prev[path[-1]])
            path.reverse()
            return tuple(path + [start])
        for y in sorted(succ[x]):
            if y not in prev:
                prev[y] = x
                frontier.append(y)
    return (start, start)
