"""Generic cospark of a sparsity pattern in polynomial time.

For every choice of an excluded column v, start from the rows that avoid v,
compute their structural rank once with Hopcroft-Karp, then greedily admit the
remaining rows as long as the structural rank stays at most n - 1. The largest
such row set X_f gives spcospark = m - |X_f|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matching import (
    RowSubgraphView,
    apply_path,
    find_augmenting_path,
    max_matching,
)
from .pattern import BipartiteGraph, SparsityPattern, build_graph


@dataclass(frozen=True)
class ColumnDiagnostic:
    excluded_col: int
    x_w_size: int
    b_size: int
    x_bar_size: int


@dataclass(frozen=True)
class CosparkResult:
    spcospark: int
    x_f: frozenset[int]
    deficient: bool
    per_w: tuple[ColumnDiagnostic, ...] | None = None


def compute_x_w(graph: BipartiteGraph, excluded_col: int) -> frozenset[int]:
    """Rows with a structural zero in column `excluded_col`."""
    if not 0 <= excluded_col < graph.n:
        raise ValueError(f"column {excluded_col} out of range for n={graph.n}")
    return frozenset(i for i, cols in enumerate(graph.row_adj) if excluded_col not in cols)


def greedy_extend(
    graph: BipartiteGraph, x_w: Sequence[int] | frozenset[int], order: Sequence[int]
) -> tuple[frozenset[int], int]:
    """Grow `x_w` by the rows of `order` whose addition keeps sprank <= n - 1.

    A row is rejected exactly when an augmenting path from it would lift the
    matching to size n. Returns (x_bar, |B|).
    """
    target = graph.n - 1
    view = RowSubgraphView(graph, x_w)
    matching = max_matching(view)
    if matching.size > target:
        raise ValueError("starting row set already has full structural rank")

    accepted = 0
    for t in order:
        if t in view:
            raise ValueError(f"row {t} visited twice or already in X_W")
        before = matching.size
        view.activate(t)
        path = find_augmenting_path(view, matching, t)
        if path is not None:
            if before == target:
                view.deactivate(t)
                continue
            apply_path(matching, t, path)
        # sprank can grow by at most one per added row.
        assert matching.size - before in (0, 1), "row addition changed sprank by more than 1"
        assert matching.size <= target
        accepted += 1
    return frozenset(view.active_rows), accepted


def visiting_order(
    graph: BipartiteGraph, x_w: frozenset[int], order_seed: int | None, excluded_col: int
) -> list[int]:
    rest = [i for i in range(graph.m) if i not in x_w]
    if order_seed is not None:
        # One stream per excluded column keeps columns independent of each other.
        rng = np.random.default_rng([int(order_seed) % (1 << 64), excluded_col])
        rng.shuffle(rest)
    return rest


def spcospark(
    graph: BipartiteGraph | SparsityPattern,
    order_seed: int | None = None,
    diagnostics: bool = False,
) -> CosparkResult:
    """Generic cospark and a witness row set X_f.

    Complement rows are visited in ascending order unless `order_seed` is
    given, in which case each excluded column gets its own seeded shuffle.
    Ties between columns keep the lowest excluded column.
    """
    if isinstance(graph, SparsityPattern):
        graph = build_graph(graph)

    if max_matching(RowSubgraphView(graph)).size < graph.n:
        return CosparkResult(0, frozenset(), True, () if diagnostics else None)

    best: frozenset[int] | None = None
    per_w = []
    for v in range(graph.n):
        x_w = compute_x_w(graph, v)
        order = visiting_order(graph, x_w, order_seed, v)
        x_bar, b_size = greedy_extend(graph, x_w, order)
        if diagnostics:
            per_w.append(ColumnDiagnostic(v, len(x_w), b_size, len(x_bar)))
        if best is None or len(x_bar) > len(best):
            best = x_bar

    return CosparkResult(
        spcospark=graph.m - len(best),
        x_f=best,
        deficient=False,
        per_w=tuple(per_w) if diagnostics else None,
    )
