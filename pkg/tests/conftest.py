from itertools import combinations

import pytest
from hypothesis import strategies as st

from gencospark.pattern import SparsityPattern


def matching_by_edge_subsets(p: SparsityPattern, rows=None) -> int:
    """Max matching size by trying edge subsets, largest first. Tiny inputs only."""
    edges = [e for e in p.sorted_entries() if rows is None or e[0] in rows]
    for k in range(min(p.m, p.n), 0, -1):
        for sub in combinations(edges, k):
            if len({i for i, _ in sub}) == k and len({j for _, j in sub}) == k:
                return k
    return 0


@st.composite
def patterns(draw, max_m=8, max_n=4, min_m=1, min_n=1):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(min_n, max_n))
    cells = [(i, j) for i in range(m) for j in range(n)]
    chosen = draw(st.lists(st.sampled_from(cells), unique=True)) if cells else []
    return SparsityPattern(m, n, frozenset(chosen))


@pytest.fixture
def tmp_mtx(tmp_path):
    def write(text, name="p.mtx"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
