"""2<->2 games to graph colouring: the T matrix, the 4-colouring step and the arc-graph step."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from gapforge.budget import Budget, get_budget
from gapforge.derived.graphs import DiGraph, Graph, arc_graph, dir_graph, sym
from gapforge.errors import ConsistencyError, PreconditionError
from gapforge.games import Game, block_form, is_2bi2, relation_of
from gapforge.jsonio import atomic_write_text

PAIRS = tuple(itertools.product(range(4), repeat=2))   # S = {0,1,2,3}^2, row-major


def pair_index(a: int, b: int) -> int:
    return 4 * a + b


def disjointness() -> np.ndarray:
    return np.array([[0.0 if set(x) & set(y) else 1.0 for y in PAIRS] for x in PAIRS])


@dataclass(frozen=True)
class TMatrix:
    entries: np.ndarray
    max_sum_error: float
    asymmetry: float
    zero_pattern_ok: bool
    lambda2: float           # largest modulus on the complement of the constant vector
    iterations: int

    def positive(self, x: tuple[int, int], y: tuple[int, int]) -> bool:
        return self.entries[pair_index(*x), pair_index(*y)] > 0

    def certificate(self) -> dict:
        return {
            "max_row_col_error": self.max_sum_error,
            "asymmetry": self.asymmetry,
            "zero_pattern": self.zero_pattern_ok,
            "lambda2": self.lambda2,
            "iterations": self.iterations,
        }

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in PAIRS], "entries": self.entries.tolist(), "certificate": self.certificate()}


def _lambda2(T: np.ndarray, iters: int = 5000, seed: int = 0) -> float:
    """Power iteration on ``T - J/16`` (``J`` all ones), started orthogonal to the constants."""
    n = T.shape[0]
    M = T - np.full((n, n), 1.0 / n)
    x = np.random.default_rng(seed).standard_normal(n)
    x -= x.mean()
    lam = 0.0
    for _ in range(iters):
        y = M @ (M @ x)            # square to avoid sign oscillation
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0
        new = float(np.sqrt(norm / np.linalg.norm(x)))
        x = y / norm
        if abs(new - lam) < 1e-15:
            lam = new
            break
        lam = new
    return lam


def verify_T(T: np.ndarray, iterations: int = 0) -> TMatrix:
    A = disjointness()
    err = float(max(np.abs(T.sum(axis=0) - 1).max(), np.abs(T.sum(axis=1) - 1).max()))
    asym = float(np.abs(T - T.T).max())
    zero_ok = bool(np.all(T[A == 0] == 0) and np.all(T >= 0))
    return TMatrix(T, err, asym, zero_ok, _lambda2(T), iterations)


def build_T(cache: str | Path | None = None, tol: float = 1e-12, max_iter: int = 100_000) -> TMatrix:
    """Symmetric Sinkhorn scaling ``D A D`` of the disjointness pattern to a doubly stochastic matrix.

    With ``cache`` the matrix is read from (or written to) that JSON file; a
    cached matrix is re-verified before use.
    """
    if cache is not None and Path(cache).exists():
        data = json.loads(Path(cache).read_text())
        t = verify_T(np.array(data["entries"]), data["certificate"].get("iterations", 0))
        _check(t)
        return t
    A = disjointness()
    d = np.ones(len(PAIRS))
    for it in range(1, max_iter + 1):
        d = np.sqrt(d / (A @ d))
        T = d[:, None] * A * d[None, :]
        if np.abs(T.sum(axis=1) - 1).max() < tol:
            break
    else:
        raise ConsistencyError(f"Sinkhorn scaling did not converge in {max_iter} iterations")
    T = (T + T.T) / 2
    t = verify_T(T, it)
    _check(t)
    if cache is not None:
        atomic_write_text(cache, json.dumps(t.to_json(), indent=1) + "\n")
    return t


def _check(t: TMatrix) -> None:
    if t.max_sum_error > 1e-9 or t.asymmetry > 1e-12 or not t.zero_pattern_ok:
        raise ConsistencyError(f"T fails its certificate: {t.certificate()}")
    if not t.lambda2 < 1 - 1e-6:
        raise ConsistencyError(f"second eigenvalue {t.lambda2} is not below 1")


# ---------------------------------------------------------------- step 1


def tuple_of(index: int, q: int) -> tuple[int, ...]:
    """Base-4 digits, most significant first."""
    return tuple((index >> (2 * (q - 1 - i))) & 3 for i in range(q))


def step1_vertex(v: int, xs: Sequence[int]) -> int:
    q = len(xs)
    code = 0
    for x in xs:
        code = code * 4 + x
    return v * 4**q + code


def _edge_ok(T: TMatrix, s1: Sequence[int], s2: Sequence[int], x: Sequence[int], y: Sequence[int]) -> bool:
    return all(
        T.positive((x[s1[2 * i]], x[s1[2 * i + 1]]), (y[s2[2 * i]], y[s2[2 * i + 1]]))
        for i in range(len(s1) // 2)
    )


def to_colouring_step1(
    g: Game, T: TMatrix, budget: Budget | None = None, forms: dict[int, tuple] | None = None
) -> Graph:
    """Vertices ``(v, x_0..x_{q-1})`` with ``x_i`` in ``{0..3}``; edges per constraint block form.

    ``forms`` optionally fixes the block form ``(s1, s2)`` used for edge
    ``i`` (any valid decomposition gives the same graph).
    """
    budget = budget or get_budget()
    q = g.q
    if q % 2:
        raise PreconditionError("2<->2 games need an even alphabet")
    per = 4**q
    budget.require("cloud_vertices", g.num_vertices * per, "colouring step vertices")
    tuples = [tuple_of(i, q) for i in range(per)]
    edges = set()
    for idx, (u, v, c) in enumerate(g.edges):
        rel = relation_of(c, q)
        if not is_2bi2(rel, q):
            raise PreconditionError(f"edge {idx} is not a union of K_{{2,2}} blocks")
        s1, s2 = (forms or {}).get(idx) or block_form(rel, q)
        for a, x in enumerate(tuples):
            for b, y in enumerate(tuples):
                if _edge_ok(T, s1, s2, x, y):
                    edges.add((u * per + a, v * per + b))
    return Graph(g.num_vertices * per, tuple(edges))


def labelling_colouring(g: Game, labelling: Sequence[int]) -> list[int]:
    """The 4-colouring ``(v, x) -> x[labelling[v]]`` of the step-1 graph."""
    q = g.q
    per = 4**q
    return [tuple_of(i % per, q)[labelling[i // per]] for i in range(g.num_vertices * per)]


def alternative_forms(rel, q: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every block form of a 2<->2 relation (block order and order inside blocks varied)."""
    s1, s2 = block_form(rel, q)
    blocks = [((s1[2 * i], s1[2 * i + 1]), (s2[2 * i], s2[2 * i + 1])) for i in range(q // 2)]
    out = []
    for order in itertools.permutations(blocks):
        for flips in itertools.product((0, 1), repeat=2 * len(order)):
            a, b = [], []
            for i, (L, R) in enumerate(order):
                a += L[::-1] if flips[2 * i] else L
                b += R[::-1] if flips[2 * i + 1] else R
            out.append((tuple(a), tuple(b)))
    return out


# ---------------------------------------------------------------- step 2


def arc_arc(D: DiGraph) -> DiGraph:
    return arc_graph(arc_graph(D))


def to_3colouring(g: Game, T: TMatrix, budget: Budget | None = None) -> Graph:
    """``sym(arc(arc(dir(step1))))``."""
    budget = budget or get_budget()
    G = to_colouring_step1(g, T, budget)
    D = dir_graph(G)
    A1 = arc_graph(D)
    budget.require("cloud_vertices", len(A1.arcs), "arc-of-arc vertices")
    return sym(arc_graph(A1))


def lift_through_arc(D: DiGraph, colouring: Sequence[int], table: dict[tuple[int, int], int]) -> list[int]:
    """Colour arcs ``(a, b)`` of ``D`` by ``table[(colour[a], colour[b])]``."""
    return [table[(colouring[u], colouring[v])] for u, v in D.arcs]


def arc_colour_table(t: int) -> tuple[dict, dict]:
    """Maps proving that arc(arc(.)) of a ``t``-coloured digraph is 3-colourable, for ``t <= 4``.

    The first map sends ordered colour pairs (arcs of the complete digraph on
    ``t`` colours) to vertices of ``arc(K_t)``; the second is a 3-colouring of
    ``arc(arc(K_t))`` found by exhaustive search. Composing gives a
    3-colouring of ``arc(arc(D))`` from any ``t``-colouring of ``D``.
    """
    from gapforge.derived.graphs import find_colouring

    K = DiGraph(t, tuple((a, b) for a in range(t) for b in range(t) if a != b))
    A1 = arc_graph(K)
    A2 = arc_graph(A1)
    col = find_colouring(sym(A2), 3)
    if col is None:
        raise ConsistencyError(f"arc(arc(K_{t})) is not 3-colourable")
    first = {K.arcs[i]: i for i in range(len(K.arcs))}
    second = {A1.arcs[i]: col[i] for i in range(len(A1.arcs))}
    return first, second


def certify_3colouring(G: Graph, colouring4: Sequence[int]) -> list[int]:
    """3-colouring of ``sym(arc(arc(dir(G))))`` pushed through ``arc(arc(K_4))``."""
    if any(colouring4[u] == colouring4[v] for u, v in G.edges):
        raise PreconditionError("input colouring is not proper")
    first, second = arc_colour_table(4)
    D = dir_graph(G)
    A1 = arc_graph(D)
    c1 = lift_through_arc(D, colouring4, first)       # vertex of arc(K_4) per arc of D
    return lift_through_arc(A1, c1, second)
