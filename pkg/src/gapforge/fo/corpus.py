"""Exhaustive small corpora of instances and games, one per isomorphism class.

Isomorphism is that of the encoding structures: equations are ordered
triples and game edges ordered pairs, so positions are kept. Both generators
build objects item by item, drawing each item's endpoints from the elements
already used plus the next fresh ones, so every object appears at least once
up to renaming. Duplicates are removed with a canonical form: the least
relabelling-by-first-appearance over all orders of the items. Any
isomorphism maps items to items, so two objects share a canonical form iff
they are isomorphic.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from gapforge.games import Game, TwoToTwo
from gapforge.xor3 import Xor3Instance


def _first_appearance(items: Sequence[tuple], width: int) -> tuple:
    ren: dict[int, int] = {}
    out = []
    for it in items:
        ends = tuple(ren.setdefault(v, len(ren)) for v in it[:width])
        out.append(ends + tuple(it[width:]))
    return tuple(out)


def canonical_form(items: Sequence[tuple], width: int) -> tuple:
    """Least sorted first-appearance relabelling over all item orders."""
    return min(tuple(sorted(_first_appearance(order, width))) for order in itertools.permutations(items))


def xor3_corpus(max_equations: int = 3, max_vars: int | None = None) -> Iterator[Xor3Instance]:
    """Every instance with 1..max_equations equations on pairwise different variable sets.

    Variables are exactly those used (numbered ``0..n-1``) and ``max_vars``
    optionally bounds ``n``.
    """
    seen = set()

    def extend(eqs: list[tuple], used: int) -> Iterator[list[tuple]]:
        yield eqs
        if len(eqs) == max_equations:
            return
        for triple in itertools.permutations(range(used + 3), 3):
            fresh = sorted(v for v in triple if v >= used)
            if fresh != list(range(used, used + len(fresh))):
                continue              # fresh variables are taken in order
            if any(set(e[:3]) == set(triple) for e in eqs):
                continue
            for b in (0, 1):
                yield from extend(eqs + [(*triple, b)], used + len(fresh))

    for eqs in extend([], 0):
        if not eqs:
            continue
        n = 1 + max(v for e in eqs for v in e[:3])
        if max_vars is not None and n > max_vars:
            continue
        key = canonical_form(eqs, 3)
        if key in seen:
            continue
        seen.add(key)
        yield Xor3Instance(n, key)


def two_to_two_representatives(q: int) -> list[TwoToTwo]:
    return [
        TwoToTwo(p1, p2)
        for p1 in itertools.permutations(range(q))
        for p2 in itertools.permutations(range(q))
        if all(a != b for a, b in zip(p1, p2))
    ]


def two_to_two_corpus(q: int = 2, max_edges: int = 3, max_vertices: int | None = None) -> Iterator[Game]:
    """Every all-2-to-2 game with 1..max_edges edges, up to renaming vertices.

    Edges are ordered vertex pairs carrying any 2-to-2 representative;
    parallel edges are allowed and every vertex lies on an edge.
    """
    reps = [(c.pi1, c.pi2) for c in two_to_two_representatives(q)]
    seen = set()

    def extend(edges: list[tuple], used: int) -> Iterator[list[tuple]]:
        yield edges
        if len(edges) == max_edges:
            return
        for u, v in itertools.permutations(range(used + 2), 2):
            fresh = sorted(x for x in (u, v) if x >= used)
            if fresh != list(range(used, used + len(fresh))):
                continue
            for p1, p2 in reps:
                yield from extend(edges + [(u, v, p1, p2)], used + len(fresh))

    for edges in extend([], 0):
        if not edges:
            continue
        n = 1 + max(max(e[:2]) for e in edges)
        if max_vertices is not None and n > max_vertices:
            continue
        key = canonical_form(edges, 2)
        if key in seen:
            continue
        seen.add(key)
        yield Game(n, q, tuple((u, v, TwoToTwo(a, b)) for u, v, a, b in key))
