"""Plain graphs, digraphs and the exact independent-set / colouring oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from gapforge.budget import Budget, get_budget
from gapforge.errors import CapacityError


@dataclass(frozen=True)
class Graph:
    """Undirected graph on ``0..n-1``; edges stored once as ``(u, v)``, ``u <= v``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        norm = sorted({(min(u, v), max(u, v)) for u, v in self.edges})
        for u, v in norm:
            if not (0 <= u and v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", tuple(norm))

    def adjacency(self) -> list[int]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def has_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def to_json(self) -> dict:
        return {"directed": False, "n": self.n, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        arcs = tuple(sorted(set((int(u), int(v)) for u, v in self.arcs)))
        for u, v in arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u}, {v}) outside 0..{self.n - 1}")
        object.__setattr__(self, "arcs", arcs)

    def to_json(self) -> dict:
        return {"directed": True, "n": self.n, "edges": [list(a) for a in self.arcs]}


def graph_from_json(data: dict) -> Graph | DiGraph:
    pairs = [tuple(e) for e in data["edges"]]
    return DiGraph(data["n"], pairs) if data.get("directed") else Graph(data["n"], pairs)


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


# ---------------------------------------------------------------- independent sets


def max_independent_set(adj: Sequence[int], weights: Sequence[int] | None = None) -> tuple[int, int]:
    """Best ``(weight, vertex mask)`` of an independent set, by branch and bound.

    Vertices with a loop never enter. Without weights every vertex counts 1.
    """
    n = len(adj)
    w = list(weights) if weights is not None else [1] * n
    loops = sum(1 << v for v in range(n) if adj[v] >> v & 1)
    best = [0, 0]

    def bound(cand: int) -> int:
        s = 0
        while cand:
            low = cand & -cand
            s += w[low.bit_length() - 1]
            cand ^= low
        return s

    def go(cand: int, acc: int, chosen: int) -> None:
        if acc > best[0]:
            best[0], best[1] = acc, chosen
        if not cand or acc + bound(cand) <= best[0]:
            return
        # branch on a vertex of maximum degree within the candidates
        v = max((u for u in _bits(cand)), key=lambda u: ((adj[u] & cand).bit_count(), w[u]))
        if not (adj[v] & cand & ~(1 << v)):
            go(cand & ~(1 << v), acc + w[v], chosen | 1 << v)
            return
        go(cand & ~adj[v] & ~(1 << v), acc + w[v], chosen | 1 << v)
        go(cand & ~(1 << v), acc, chosen)

    go(((1 << n) - 1) & ~loops, 0, 0)
    return best[0], best[1]


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def is_value_bruteforce(G: Graph, budget: Budget | None = None) -> Fraction:
    """Largest independent set as a fraction of ``n`` (1 for the empty graph)."""
    budget = budget or get_budget()
    budget.require("is_vertices", G.n, "independent set vertices")
    if G.n == 0:
        return Fraction(1)
    size, _ = max_independent_set(G.adjacency())
    return Fraction(size, G.n)


def vc_value(G: Graph, budget: Budget | None = None) -> Fraction:
    return 1 - is_value_bruteforce(G, budget)


def is_independent(G: Graph, vertices: Iterable[int]) -> bool:
    s = set(vertices)
    return not any(u in s and v in s for u, v in G.edges)


# ---------------------------------------------------------------- colouring


def is_proper(G: Graph, colouring: Sequence[int]) -> bool:
    return all(colouring[u] != colouring[v] for u, v in G.edges)


def find_colouring(G: Graph, t: int, budget: Budget | None = None) -> list[int] | None:
    """A proper ``t``-colouring by DSATUR-ordered backtracking, or None.

    Colours are tried in order and a fresh colour is only opened once, which
    removes colour-permutation symmetry.
    """
    budget = budget or get_budget()
    if G.has_loop():
        return None
    n = G.n
    if n == 0:
        return []
    if t <= 0:
        return None
    adj = G.adjacency()
    colour = [-1] * n
    forbidden = [0] * n         # bitmask of colours used by neighbours
    nodes = [0]                 # search steps, checked against the budget

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                k = (forbidden[v].bit_count(), adj[v].bit_count())
                if key is None or k > key:
                    best, key = v, k
        return best

    def assign(v: int, c: int) -> list[int] | None:
        """Colour ``v`` with ``c``; None (and nothing changed) if a neighbour runs out of colours."""
        colour[v] = c
        touched = []
        for u in _bits(adj[v]):
            if colour[u] < 0 and not forbidden[u] >> c & 1:
                forbidden[u] |= 1 << c
                touched.append(u)
        if all(forbidden[u].bit_count() < t for u in touched):
            return touched
        undo(v, c, touched)
        return None

    def undo(v: int, c: int, touched: list[int]) -> None:
        for u in touched:
            forbidden[u] &= ~(1 << c)
        colour[v] = -1

    # explicit stack of (vertex, colour tried, colours used before, touched); deep graphs would overflow recursion
    stack: list[tuple[int, int, int, list[int]]] = []
    v, c, used = pick(), 0, 0
    while True:
        nodes[0] += 1
        if nodes[0] > budget.chroma_nodes:
            raise CapacityError(f"colouring search exceeded chroma_nodes={budget.chroma_nodes}")
        touched = None
        while c < min(used + 1, t):
            if not forbidden[v] >> c & 1:
                touched = assign(v, c)
                if touched is not None:
                    break
            c += 1
        if touched is not None:
            stack.append((v, c, used, touched))
            if len(stack) == n:
                return list(colour)
            used = max(used, c + 1)
            v, c = pick(), 0
            continue
        if not stack:
            return None
        v, c, used, touched = stack.pop()
        undo(v, c, touched)
        c += 1


def chromatic_leq(G: Graph, t: int, budget: Budget | None = None) -> bool:
    """Exact decision ``chi(G) <= t``."""
    budget = budget or get_budget()
    budget.require("chroma_vertices", G.n, "colouring vertices")
    return find_colouring(G, t, budget) is not None


def is_bipartite(G: Graph) -> bool:
    """Linear-time 2-colourability (used for large arc graphs)."""
    if G.has_loop():
        return False
    side = [-1] * G.n
    nbrs: list[list[int]] = [[] for _ in range(G.n)]
    for u, v in G.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for s in range(G.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in nbrs[u]:
                if side[v] < 0:
                    side[v] = 1 - side[u]
                    stack.append(v)
                elif side[v] == side[u]:
                    return False
    return True


# ---------------------------------------------------------------- dir / sym / arc


def dir_graph(G: Graph) -> DiGraph:
    """Both orientations of every edge."""
    return DiGraph(G.n, tuple(a for u, v in G.edges for a in ((u, v), (v, u))))


def sym(D: DiGraph) -> Graph:
    return Graph(D.n, D.arcs)


def arc_graph(D: DiGraph) -> DiGraph:
    """Vertices are the arcs of ``D`` (in ``D.arcs`` order); ``(a, b) -> (b, c)``."""
    by_tail: dict[int, list[int]] = {}
    for j, (u, _) in enumerate(D.arcs):
        by_tail.setdefault(u, []).append(j)
    arcs = [(i, j) for i, (_, v) in enumerate(D.arcs) for j in by_tail.get(v, ())]
    return DiGraph(len(D.arcs), tuple(arcs))


def arc_colouring(D: DiGraph, colouring: Sequence[int]) -> list[tuple[int, int]]:
    """Colour of each arc of ``D``: the ordered pair of endpoint colours.

    Adjacent arcs ``(a, b), (b, c)`` get ``(x, y)`` and ``(y, z)``; equal
    pairs would force ``x = y``, impossible for a proper colouring of ``D``.
    """
    return [(colouring[u], colouring[v]) for u, v in D.arcs]
