"""Sparsity patterns, their bipartite-graph view, and Matrix Market I/O.

Coordinates are 0-indexed in memory and 1-indexed on disk.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

MM_BANNER = "%%MatrixMarket matrix coordinate pattern general"


class PatternError(ValueError):
    """Base class for invalid pattern construction."""


class BoundsError(PatternError):
    pass


class DuplicateEntryError(PatternError):
    pass


class ParseError(PatternError):
    """Malformed Matrix Market input; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class SparsityPattern:
    m: int
    n: int
    entries: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise PatternError(f"dimensions must be positive, got {self.m}x{self.n}")
        for i, j in self.entries:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise BoundsError(f"entry ({i}, {j}) outside {self.m}x{self.n}")

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def sorted_entries(self) -> list[tuple[int, int]]:
        return sorted(self.entries)

    def restrict_rows(self, rows: Iterable[int]) -> "SparsityPattern":
        """Pattern keeping only the given rows (dimensions unchanged)."""
        keep = set(rows)
        return SparsityPattern(self.m, self.n, frozenset(e for e in self.entries if e[0] in keep))


@dataclass(frozen=True)
class BipartiteGraph:
    """Row vertices X, column vertices Y, one edge per pattern entry."""

    m: int
    n: int
    row_adj: tuple[tuple[int, ...], ...]
    col_adj: tuple[tuple[int, ...], ...]
    edge_count: int


def from_entries(m: int, n: int, coords: Iterable[tuple[int, int]]) -> SparsityPattern:
    seen: set[tuple[int, int]] = set()
    for i, j in coords:
        i, j = int(i), int(j)
        if not (0 <= i < m and 0 <= j < n):
            raise BoundsError(f"entry ({i}, {j}) outside {m}x{n}")
        if (i, j) in seen:
            raise DuplicateEntryError(f"duplicate entry ({i}, {j})")
        seen.add((i, j))
    return SparsityPattern(m, n, frozenset(seen))


def identity_pattern(n: int) -> SparsityPattern:
    return SparsityPattern(n, n, frozenset((i, i) for i in range(n)))


def dense_pattern(m: int, n: int) -> SparsityPattern:
    return SparsityPattern(m, n, frozenset((i, j) for i in range(m) for j in range(n)))


def random_pattern(m: int, n: int, density: float, seed: int) -> SparsityPattern:
    """Include each of the m*n cells independently with probability `density`.

    The result is a pure function of the arguments: the cell draws come from a
    PCG64 stream seeded with `seed`, consumed in row-major order.
    """
    if not 0.0 <= density <= 1.0:
        raise PatternError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(_seed_key(seed))
    mask = rng.random((m, n)) < density
    rows, cols = np.nonzero(mask)
    return SparsityPattern(m, n, frozenset(zip(rows.tolist(), cols.tolist())))


def _seed_key(seed: int) -> int:
    # numpy seeding needs a non-negative integer; fold signed 64-bit seeds in.
    return int(seed) % (1 << 64)


def build_graph(p: SparsityPattern) -> BipartiteGraph:
    rows: list[list[int]] = [[] for _ in range(p.m)]
    cols: list[list[int]] = [[] for _ in range(p.n)]
    for i, j in p.sorted_entries():
        rows[i].append(j)
        cols[j].append(i)
    return BipartiteGraph(
        m=p.m,
        n=p.n,
        row_adj=tuple(tuple(r) for r in rows),
        col_adj=tuple(tuple(c) for c in cols),
        edge_count=p.nnz,
    )


def write_pattern(p: SparsityPattern, out: TextIO | None = None) -> str:
    """Serialize to Matrix Market coordinate-pattern text, entries sorted by (i, j)."""
    lines = [MM_BANNER, f"{p.m} {p.n} {p.nnz}"]
    lines.extend(f"{i + 1} {j + 1}" for i, j in p.sorted_entries())
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


def read_pattern(text: str | TextIO) -> SparsityPattern:
    stream = io.StringIO(text) if isinstance(text, str) else text
    lines = iter(enumerate(stream, start=1))

    try:
        lineno, banner = next(lines)
    except StopIteration:
        raise ParseError(1, "empty input") from None
    # Matrix Market banners are case-insensitive.
    if banner.lower().split() != MM_BANNER.lower().split():
        raise ParseError(lineno, f"expected header {MM_BANNER!r}")

    size: tuple[int, int, int] | None = None
    coords: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in lines:
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        tokens = line.split()
        if size is None:
            if len(tokens) != 3:
                raise ParseError(lineno, "size line must be 'm n nnz'")
            m, n, nnz = (_parse_int(t, lineno) for t in tokens)
            if m < 1 or n < 1 or nnz < 0:
                raise ParseError(lineno, f"invalid size line {line!r}")
            if nnz > m * n:
                raise ParseError(lineno, f"nnz={nnz} exceeds m*n={m * n}")
            size = (m, n, nnz)
            continue
        m, n, nnz = size
        if len(tokens) != 2:
            raise ParseError(lineno, "entry line must be 'i j'")
        i, j = (_parse_int(t, lineno) for t in tokens)
        if not (1 <= i <= m and 1 <= j <= n):
            raise ParseError(lineno, f"index ({i}, {j}) out of range for {m}x{n}")
        if len(coords) == nnz:
            raise ParseError(lineno, f"more than the declared {nnz} entries")
        key = (i - 1, j - 1)
        if key in seen:
            raise ParseError(lineno, f"duplicate entry ({i}, {j})")
        seen.add(key)
        coords.append(key)

    if size is None:
        raise ParseError(lineno, "missing size line")
    if len(coords) != size[2]:
        raise ParseError(lineno, f"declared {size[2]} entries, found {len(coords)}")
    return SparsityPattern(size[0], size[1], frozenset(coords))


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"non-integer token {token!r}") from None


def load_pattern(path) -> SparsityPattern:
    with open(path, encoding="ascii") as fh:
        return read_pattern(fh)


def save_pattern(p: SparsityPattern, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        write_pattern(p, fh)
