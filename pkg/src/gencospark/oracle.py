"""Brute-force ground truth for small instances.

Two oracles, both independent of the polynomial algorithm:

* `brute_spcospark` enumerates row subsets of the pattern and measures each
  induced max matching with its own small augmenting-path routine.
* `brute_cospark` solves the l0 problem min ||Ax||_0, x != 0, exactly on a
  rational realization of the pattern.

All arithmetic is exact; there is no tolerance anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .pattern import SparsityPattern

MAX_ORACLE_ROWS = 22
DENOMINATOR = 1 << 20


class SizeGuardError(ValueError):
    """Raised when an exponential enumeration would be too large."""


@dataclass(frozen=True)
class RationalMatrix:
    m: int
    n: int
    cells: tuple[tuple[Fraction, ...], ...]

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j) for i, row in enumerate(self.cells) for j, x in enumerate(row) if x != 0
        )

    def integer_rows(self) -> list[list[int]]:
        """Rows scaled by the common denominator; same rank and kernel."""
        den = 1
        for row in self.cells:
            for x in row:
                den = lcm(den, x.denominator)
        return [[int(x * den) for x in row] for row in self.cells]

    def matvec(self, x: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self.cells]


@dataclass(frozen=True)
class CosparkWitness:
    value: int
    support_rows: frozenset[int]
    x_star: tuple[Fraction, ...]


def realize(p: SparsityPattern, seed: int) -> RationalMatrix:
    """Random exact realization: each entry of the pattern gets k / 2**20, k uniform in [1, 2**20]."""
    rng = np.random.default_rng(int(seed) % (1 << 64))
    entries = p.sorted_entries()
    nums = rng.integers(1, DENOMINATOR, size=len(entries), endpoint=True).tolist()
    cells = [[Fraction(0)] * p.n for _ in range(p.m)]
    for (i, j), k in zip(entries, nums):
        cells[i][j] = Fraction(k, DENOMINATOR)
    return RationalMatrix(p.m, p.n, tuple(tuple(r) for r in cells))


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [r[:] for r in rows]
    m = len(a)
    if m == 0:
        return 0
    n = len(a[0])
    rank = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(rank, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank]
        pc = p[c]
        for i in range(rank + 1, m):
            r = a[i]
            rc = r[c]
            for j in range(c + 1, n):
                q, rem = divmod(pc * r[j] - rc * p[j], prev)
                assert rem == 0, "Bareiss division not exact"
                r[j] = q
            r[c] = 0
        prev = pc
        rank += 1
        if rank == m:
            break
    return rank


def exact_rank(mat: RationalMatrix, rows: Iterable[int] | None = None) -> int:
    ints = mat.integer_rows()
    if rows is not None:
        ints = [ints[i] for i in sorted(set(rows))]
    return bareiss_rank(ints)


def kernel_vector(rows: list[list[int]], n: int) -> list[int] | None:
    """A nonzero integer vector x with row . x == 0 for every row, or None if only x = 0."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][c]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        pivots.append(c)
        rank += 1
    free = next((c for c in range(n) if c not in pivots), None)
    if free is None:
        return None
    x = [Fraction(0)] * n
    x[free] = Fraction(1)
    for k, c in enumerate(pivots):
        x[c] = -a[k][free]
    return _clear_denominators(x)


def _clear_denominators(x: Sequence[Fraction]) -> list[int]:
    den = 1
    for v in x:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in x]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def _normalize(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        g = gcd(g, v)
    return [v // g for v in row] if g > 1 else row


def _eliminate(row: list[int], col: int, by: list[int]) -> list[int]:
    """Integer combination of `row` and `by` with a zero in column `col`."""
    rc = row[col]
    if not rc:
        return row
    bc = by[col]
    return _normalize([bc * x - rc * y for x, y in zip(row, by)])


def brute_cospark(mat: RationalMatrix) -> CosparkWitness:
    """Exact cospark of `mat` with a minimizing vector.

    A sparsest nonzero Ax has a zero set U of rank exactly n - 1 (for a full
    column rank A), and U contains n - 1 independent rows whose kernel is the
    line through x. So every independent (n-1)-row subset is enumerated, its
    kernel vector taken, and the zeros of Ax counted: O(m^(n-1)) kernels.
    """
    m, n = mat.m, mat.n
    if m > MAX_ORACLE_ROWS:
        raise SizeGuardError(f"m={m} exceeds the oracle limit of {MAX_ORACLE_ROWS} rows")
    a = mat.integer_rows()

    if bareiss_rank(a) < n:
        return _witness(mat, a, kernel_vector(a, n))

    best: list[int] | None = None
    best_zeros = -1
    # Depth-first over increasing row tuples. Each node carries the chosen rows
    # in fully reduced integer echelon form as (pivot column, row) pairs, so a
    # dependent row reduces to zero and is pruned on the spot.
    stack: list[tuple[int, list[tuple[int, list[int]]]]] = [(0, [])]
    while stack:
        start, basis = stack.pop()
        if len(basis) == n - 1:
            x = _reduced_kernel(basis, n)
            zeros = 0
            for r in a:
                if _dot(r, x) == 0:
                    zeros += 1
            if zeros > best_zeros:
                best, best_zeros = x, zeros
            continue
        need = n - 1 - len(basis)
        # Reverse push so rows are popped in lexicographic order.
        for i in range(m - need, start - 1, -1):
            red = a[i]
            for pc, b in basis:
                red = _eliminate(red, pc, b)
            pc = next((c for c, v in enumerate(red) if v), None)
            if pc is None:
                continue
            new_basis = [(c, _eliminate(b, pc, red)) for c, b in basis]
            new_basis.append((pc, red))
            stack.append((i + 1, new_basis))
    return _witness(mat, a, best)


def _reduced_kernel(basis: list[tuple[int, list[int]]], n: int) -> list[int]:
    # With n - 1 fully reduced rows there is exactly one free column f, and
    # each row reads piv * x[pc] + row[f] * x[f] = 0.
    pivots = {pc for pc, _ in basis}
    f = next(c for c in range(n) if c not in pivots)
    scale = 1
    for pc, b in basis:
        scale = lcm(scale, b[pc])
    x = [0] * n
    x[f] = scale
    for pc, b in basis:
        x[pc] = -b[f] * (scale // b[pc])
    return _normalize(x)


def _dot(r: Sequence[int], x: Sequence[int]) -> int:
    return sum(p * q for p, q in zip(r, x))


def _witness(mat: RationalMatrix, a: list[list[int]], x: list[int]) -> CosparkWitness:
    support = frozenset(i for i, r in enumerate(a) if _dot(r, x) != 0)
    w = CosparkWitness(len(support), support, tuple(Fraction(v) for v in x))
    check_witness(mat, w)
    return w


def check_witness(mat: RationalMatrix, w: CosparkWitness) -> None:
    """Re-verify a witness by direct rational multiplication."""
    assert any(v != 0 for v in w.x_star), "witness vector is zero"
    ax = mat.matvec(w.x_star)
    assert frozenset(i for i, v in enumerate(ax) if v != 0) == w.support_rows
    assert len(w.support_rows) == w.value


def _bitmask_matching(masks: Sequence[int], rows: Iterable[int], n: int) -> int:
    """Max matching size by simple augmenting DFS over column bitmasks."""
    col_owner = [-1] * n

    def augment(r: int, seen: int) -> tuple[bool, int]:
        avail = masks[r] & ~seen
        while avail:
            low = avail & -avail
            c = low.bit_length() - 1
            avail ^= low
            seen |= low
            owner = col_owner[c]
            if owner < 0:
                col_owner[c] = r
                return True, seen
            ok, seen = augment(owner, seen)
            if ok:
                col_owner[c] = r
                return True, seen
        return False, seen

    size = 0
    for r in rows:
        ok, _ = augment(r, 0)
        if ok:
            size += 1
            if size == n:
                break
    return size


def brute_spcospark(p: SparsityPattern) -> tuple[int, frozenset[int]]:
    """Generic cospark by exhaustive search over row subsets, largest first.

    The first subset whose induced max matching has size n - 1 is a largest
    such set; its complement size is the generic cospark.
    """
    m, n = p.m, p.n
    if m > MAX_ORACLE_ROWS:
        raise SizeGuardError(f"m={m} exceeds the oracle limit of {MAX_ORACLE_ROWS} rows")
    masks = [0] * m
    for i, j in p.entries:
        masks[i] |= 1 << j
    if _bitmask_matching(masks, range(m), n) < n:
        return 0, frozenset()
    for k in range(m - 1, n - 2, -1):
        for rows in combinations(range(m), k):
            size = _bitmask_matching(masks, rows, n)
            if size <= n - 1:
                assert size == n - 1, "a largest rank-deficient row set must match n - 1"
                return m - k, frozenset(rows)
    raise AssertionError("unreachable: any n - 1 rows match at most n - 1 columns")
