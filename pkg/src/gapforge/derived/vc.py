"""2-to-2 games to vertex-weighted independent-set graphs, and their cloud expansion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from gapforge.budget import Budget, get_budget
from gapforge.derived.graphs import Graph, graph_from_json, max_independent_set
from gapforge.errors import PreconditionError
from gapforge.games import Game, WeightedGame, relation_of
from gapforge.jsonio import frac_from_json, frac_to_json

DEFAULT_P = Fraction(29, 100)


@dataclass(frozen=True)
class WeightedGraph:
    """Vertex ``i`` is ``labels[i] = (v, A)`` with ``A`` a bitmask over the alphabet."""

    q: int
    p: Fraction
    labels: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...]
    graph: Graph

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def to_json(self) -> dict:
        return {
            "kind": "weighted-graph",
            "q": self.q,
            "p": frac_to_json(self.p),
            "labels": [list(x) for x in self.labels],
            "weights": [frac_to_json(w) for w in self.weights],
            "graph": self.graph.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightedGraph":
        g = graph_from_json(data["graph"])
        if not isinstance(g, Graph):
            raise ValueError("weighted graph must be undirected")
        return cls(
            int(data["q"]),
            frac_from_json(data["p"]),
            tuple((int(v), int(A)) for v, A in data["labels"]),
            tuple(frac_from_json(w) for w in data["weights"]),
            g,
        )


def set_weight(p: Fraction, q: int, A: int) -> Fraction:
    s = A.bit_count()
    return p**s * (1 - p) ** (q - s)


def to_independent_set(g: Game | WeightedGame, p: Fraction = DEFAULT_P, budget: Budget | None = None) -> WeightedGraph:
    """Vertices ``V x P(Sigma)``; ``(u, A1) ~ (v, A2)`` when some constraint on ``u, v`` meets no pair of ``A1 x A2``."""
    budget = budget or get_budget()
    game = g.game if isinstance(g, WeightedGame) else g
    p = Fraction(p)
    if not 0 < p < 1:
        raise PreconditionError("p must lie strictly between 0 and 1")
    q = game.q
    n = game.num_vertices << q
    budget.require("cloud_vertices", n, "independent-set vertices")
    labels = tuple((v, A) for v in range(game.num_vertices) for A in range(1 << q))
    weights = tuple(set_weight(p, q, A) for _, A in labels)
    edges = set()
    for u, v, c in game.edges:
        rel = relation_of(c, q)
        for A1 in range(1 << q):
            for A2 in range(1 << q):
                if not any(A1 >> a & 1 and A2 >> b & 1 for a, b in rel):
                    edges.add(((u << q) | A1, (v << q) | A2))
    return WeightedGraph(q, p, labels, weights, Graph(n, tuple(edges)))


def weighted_is_value(wg: WeightedGraph, budget: Budget | None = None) -> Fraction:
    """Heaviest independent set over the total weight."""
    budget = budget or get_budget()
    budget.require("is_vertices", wg.graph.n, "weighted independent set vertices")
    if wg.graph.n == 0:
        return Fraction(1)
    scale = lcm(*(w.denominator for w in wg.weights))
    ints = [int(w * scale) for w in wg.weights]
    best, _ = max_independent_set(wg.graph.adjacency(), ints)
    return Fraction(best, sum(ints))


def cloud_sizes(wg: WeightedGraph) -> list[int]:
    """``W(v, A) = Q^q w(v, A)`` for ``p = P/Q`` in lowest terms."""
    Q = wg.p.denominator
    return [int(w * Q**wg.q) for w in wg.weights]


def cloud_expand(wg: WeightedGraph, budget: Budget | None = None) -> Graph:
    """Replace ``(v, A)`` by ``W(v, A)`` independent twins; adjacency is inherited."""
    budget = budget or get_budget()
    sizes = cloud_sizes(wg)
    budget.require("cloud_vertices", sum(sizes), "cloud expansion vertices")
    start = [0]
    for s in sizes:
        start.append(start[-1] + s)
    edges = [
        (start[a] + i, start[b] + j)
        for a, b in wg.graph.edges
        for i in range(sizes[a])
        for j in range(sizes[b])
    ]
    return Graph(start[-1], tuple(edges))


def labelling_set(wg: WeightedGraph, labelling: Sequence[int]) -> list[int]:
    """``{(v, A) : labelling[v] in A}`` as vertex indices."""
    return [i for i, (v, A) in enumerate(wg.labels) if A >> labelling[v] & 1]


def labelling_measure(wg: WeightedGraph, labelling: Sequence[int]) -> list[Fraction]:
    """Weight captured per game vertex (``p`` each by the binomial identity)."""
    out = [Fraction(0)] * (len(wg.labels) >> wg.q)
    for i in labelling_set(wg, labelling):
        out[wg.labels[i][0]] += wg.weights[i]
    return out
