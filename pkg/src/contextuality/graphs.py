"""Small graph helpers: deterministic maximal-clique enumeration."""

from __future__ import annotations


def maximal_cliques(n: int, adjacent) -> list[tuple[int, ...]]:
    """All maximal cliques of the graph on ``range(n)``, canonically sorted.

    ``adjacent(i, j)`` must be symmetric and irreflexive.  Bron-Kerbosch
    with pivoting; the output is independent of search order because each
    clique is sorted and the list of cliques is sorted lexicographically.
    """
    neighbours = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(i, j):
                neighbours[i].add(j)
                neighbours[j].add(i)
    out: list[tuple[int, ...]] = []

    def expand(r: set, p: set, x: set) -> None:
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda v: len(neighbours[v] & p))
        for v in sorted(p - neighbours[pivot]):
            expand(r | {v}, p & neighbours[v], x & neighbours[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(n)), set())
    out.sort()
    return out
