"""Maximum bipartite matching on row-restricted views of a pattern graph.

Batch matchings use Hopcroft-Karp. Rows can then be added one at a time with
`try_augment`, which runs a single alternating BFS from the new row instead of
recomputing the matching.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .pattern import BipartiteGraph

NONE = -1


class Matching:
    """Partial bijection between rows and columns."""

    __slots__ = ("row_match", "col_match", "size")

    def __init__(self, m: int, n: int):
        self.row_match = [NONE] * m
        self.col_match = [NONE] * n
        self.size = 0

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.row_match) if j != NONE]

    def matched_rows(self) -> set[int]:
        return {i for i, j in enumerate(self.row_match) if j != NONE}

    def copy(self) -> "Matching":
        out = Matching.__new__(Matching)
        out.row_match = self.row_match[:]
        out.col_match = self.col_match[:]
        out.size = self.size
        return out

    def check(self, graph: BipartiteGraph) -> None:
        """Raise AssertionError unless this is a valid matching of `graph`."""
        assert len(self.row_match) == graph.m and len(self.col_match) == graph.n
        count = 0
        for j, i in enumerate(self.col_match):
            if i == NONE:
                continue
            count += 1
            assert self.row_match[i] == j, f"col {j} -> row {i} not mirrored"
            assert j in graph.row_adj[i], f"({i}, {j}) is not an edge"
        for i, j in enumerate(self.row_match):
            if j != NONE:
                assert self.col_match[j] == i, f"row {i} -> col {j} not mirrored"
        assert count == self.size, f"size {self.size} != {count} matched columns"

    def _link(self, i: int, j: int) -> None:
        self.row_match[i] = j
        self.col_match[j] = i


class RowSubgraphView:
    """The subgraph induced by a set of active rows.

    Membership is a bitmap over rows so rows can be switched on and off in
    O(1); the underlying graph is shared, never copied.
    """

    __slots__ = ("graph", "_active", "_count")

    def __init__(self, graph: BipartiteGraph, rows: Iterable[int] | None = None):
        self.graph = graph
        if rows is None:
            self._active = [True] * graph.m
            self._count = graph.m
        else:
            self._active = [False] * graph.m
            self._count = 0
            for r in rows:
                self.activate(r)

    @property
    def active_rows(self) -> list[int]:
        return [i for i, on in enumerate(self._active) if on]

    def __len__(self) -> int:
        return self._count

    def __contains__(self, row: int) -> bool:
        return self._active[row]

    def activate(self, row: int) -> None:
        if not 0 <= row < self.graph.m:
            raise IndexError(f"row {row} out of range")
        if not self._active[row]:
            self._active[row] = True
            self._count += 1

    def deactivate(self, row: int) -> None:
        if self._active[row]:
            self._active[row] = False
            self._count -= 1


def max_matching(view: RowSubgraphView) -> Matching:
    """Hopcroft-Karp restricted to the view's active rows.

    Adjacency is scanned in ascending column order so the result is
    deterministic.
    """
    g = view.graph
    adj = g.row_adj
    rows = view.active_rows
    mt = Matching(g.m, g.n)

    # Cheap greedy start; Hopcroft-Karp phases then finish the job.
    for r in rows:
        for c in adj[r]:
            if mt.col_match[c] == NONE:
                mt._link(r, c)
                mt.size += 1
                break

    inf = g.m + 1
    dist = [inf] * g.m
    while True:
        # BFS: layer the free rows and their alternating successors.
        queue = deque()
        for r in rows:
            if mt.row_match[r] == NONE:
                dist[r] = 0
                queue.append(r)
            else:
                dist[r] = inf
        limit = inf
        while queue:
            r = queue.popleft()
            if dist[r] >= limit:
                continue
            for c in adj[r]:
                r2 = mt.col_match[c]
                if r2 == NONE:
                    if limit == inf:
                        limit = dist[r] + 1
                elif dist[r2] == inf:
                    dist[r2] = dist[r] + 1
                    queue.append(r2)
        if limit == inf:
            break

        # DFS along the layers for a maximal set of disjoint shortest paths.
        ptr = [0] * g.m
        for root in rows:
            if mt.row_match[root] != NONE:
                continue
            stack = [root]
            while stack:
                r = stack[-1]
                if ptr[r] == len(adj[r]):
                    dist[r] = inf
                    stack.pop()
                    continue
                c = adj[r][ptr[r]]
                ptr[r] += 1
                r2 = mt.col_match[c]
                if r2 == NONE:
                    if dist[r] + 1 != limit:
                        continue
                    # Flip the path: each stacked row takes the column it
                    # stepped through; the last takes the free column c.
                    for k in range(len(stack) - 1, -1, -1):
                        row = stack[k]
                        nxt = mt.row_match[row]
                        mt._link(row, c)
                        c = nxt
                    mt.size += 1
                    for row in stack:
                        dist[row] = inf
                    break
                if dist[r2] == dist[r] + 1:
                    stack.append(r2)
    return mt


def sprank(view: RowSubgraphView) -> int:
    """Structural (generic) rank of the rows in `view`."""
    return max_matching(view).size


def find_augmenting_path(
    view: RowSubgraphView, matching: Matching, root: int
) -> list[int] | None:
    """BFS for an alternating path from unmatched row `root` to a free column.

    Only rows reachable through matched columns are visited, so rows outside
    the view are never touched as long as the matching lives inside it.
    Returns the rows along the path (root first) followed by the free column,
    or None when no such path exists.
    """
    adj = view.graph.row_adj
    col_match = matching.col_match
    parent: dict[int, int] = {}  # column -> row it was reached from
    queue = deque([root])
    while queue:
        r = queue.popleft()
        for c in adj[r]:
            if c in parent:
                continue
            parent[c] = r
            r2 = col_match[c]
            if r2 == NONE:
                path_cols = [c]
                while r != root:
                    c = matching.row_match[r]
                    path_cols.append(c)
                    r = parent[c]
                path_cols.reverse()
                return path_cols
            queue.append(r2)
    return None


def apply_path(matching: Matching, root: int, path_cols: list[int]) -> None:
    """XOR the matching with the alternating path described by `path_cols`.

    `path_cols` is the column sequence from `find_augmenting_path`: the first
    column is adjacent to `root`, each subsequent column was matched to the
    row reached through the previous one, and the last column is free.
    """
    r = root
    for c in path_cols:
        nxt = matching.col_match[c]
        matching._link(r, c)
        r = nxt
    matching.size += 1


def try_augment(
    view: RowSubgraphView, matching: Matching, new_row: int
) -> tuple[Matching, bool]:
    """Activate `new_row` and grow `matching` by one if a path exists.

    The matching is updated in place and returned for convenience.
    """
    if new_row in view:
        raise ValueError(f"row {new_row} is already active in the view")
    view.activate(new_row)
    path = find_augmenting_path(view, matching, new_row)
    if path is None:
        return matching, False
    apply_path(matching, new_row, path)
    return matching, True


def has_augmenting_path(view: RowSubgraphView, matching: Matching) -> bool:
    """Berge check: is there any augmenting path from a free active row?"""
    for r in view.active_rows:
        if matching.row_match[r] == NONE and find_augmenting_path(view, matching, r):
            return True
    return False
