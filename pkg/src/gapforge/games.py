"""Label cover games with 1-to-1 and 2-to-2 constraints, and their exact oracles.

Constraints are stored as permutation representatives but every comparison
goes through the relation they denote, because different representatives can
describe the same relation.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, gcd
from typing import Iterable, Sequence, Union

import numpy as np

from gapforge.budget import Budget, get_budget
from gapforge.errors import PreconditionError
from gapforge.jsonio import frac_from_json, frac_to_json

Permutation = tuple[int, ...]
Relation = frozenset  # of (left label, right label)


def check_permutation(p: Sequence[int], q: int) -> Permutation:
    p = tuple(int(i) for i in p)
    if sorted(p) != list(range(q)):
        raise ValueError(f"{p} is not a permutation of 0..{q - 1}")
    return p


def identity(q: int) -> Permutation:
    return tuple(range(q))


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


@dataclass(frozen=True)
class OneToOne:
    pi: Permutation

    def __post_init__(self) -> None:
        object.__setattr__(self, "pi", check_permutation(self.pi, len(self.pi)))

    kind = "1to1"


@dataclass(frozen=True)
class TwoToTwo:
    """Label ``i`` on the left is related to ``pi1[i]`` and ``pi2[i]`` on the right."""

    pi1: Permutation
    pi2: Permutation

    def __post_init__(self) -> None:
        q = len(self.pi1)
        object.__setattr__(self, "pi1", check_permutation(self.pi1, q))
        object.__setattr__(self, "pi2", check_permutation(self.pi2, q))
        if any(a == b for a, b in zip(self.pi1, self.pi2)):
            raise ValueError("2-to-2 constraint needs pi1(i) != pi2(i) for every i")

    kind = "2to2"


Constraint = Union[OneToOne, TwoToTwo]


def alphabet_size(c: Constraint) -> int:
    return len(c.pi) if isinstance(c, OneToOne) else len(c.pi1)


def relation_of(c: Constraint, q: int | None = None) -> Relation:
    if q is not None and alphabet_size(c) != q:
        raise ValueError(f"constraint over {alphabet_size(c)} labels used with q={q}")
    if isinstance(c, OneToOne):
        return frozenset(enumerate(c.pi))
    return frozenset(enumerate(c.pi1)) | frozenset(enumerate(c.pi2))


def transpose(rel: Iterable[tuple[int, int]]) -> Relation:
    return frozenset((b, a) for a, b in rel)


def compose(r1: Iterable[tuple[int, int]], r2: Iterable[tuple[int, int]]) -> Relation:
    """``{(a, c) : (a, b) in r1 and (b, c) in r2}``."""
    by_left: dict[int, list[int]] = defaultdict(list)
    for b, c in r2:
        by_left[b].append(c)
    return frozenset((a, c) for a, b in r1 for c in by_left.get(b, ()))


def degrees(rel: Iterable[tuple[int, int]], q: int) -> tuple[list[int], list[int]]:
    left, right = [0] * q, [0] * q
    for a, b in rel:
        left[a] += 1
        right[b] += 1
    return left, right


def is_d_to_d(rel: Iterable[tuple[int, int]], q: int, d: int) -> bool:
    left, right = degrees(rel, q)
    return all(x == d for x in left) and all(x == d for x in right)


def constraint_from_relation(rel: Iterable[tuple[int, int]], q: int) -> Constraint:
    """A permutation representative of a 1-to-1 or 2-to-2 relation.

    A 2-to-2 relation is a 2-regular bipartite graph, i.e. a union of even
    cycles; walking each cycle and alternating edges splits it into two
    perfect matchings ``pi1``, ``pi2``.
    """
    rel = frozenset(rel)
    if is_d_to_d(rel, q, 1):
        pi = [0] * q
        for a, b in rel:
            pi[a] = b
        return OneToOne(tuple(pi))
    if not is_d_to_d(rel, q, 2):
        raise ValueError("relation is neither 1-to-1 nor 2-to-2")
    right_of: dict[int, list[int]] = defaultdict(list)
    left_of: dict[int, list[int]] = defaultdict(list)
    for a, b in sorted(rel):
        right_of[a].append(b)
        left_of[b].append(a)
    pi1: list[int | None] = [None] * q
    pi2: list[int | None] = [None] * q
    for start in range(q):
        if pi1[start] is not None:
            continue
        a, b = start, right_of[start][0]
        while pi1[a] is None:
            pi1[a] = b
            # the other left neighbour of b takes b through pi2
            a2 = left_of[b][0] if left_of[b][1] == a else left_of[b][1]
            pi2[a2] = b
            b = right_of[a2][0] if right_of[a2][1] == b else right_of[a2][1]
            a = a2
    return TwoToTwo(tuple(pi1), tuple(pi2))  # type: ignore[arg-type]


# ---------------------------------------------------------------- 2<->2 block form


def is_2bi2(c: Constraint | Iterable[tuple[int, int]], q: int) -> bool:
    """The relation is a disjoint union of ``K_{2,2}`` blocks."""
    rel = relation_of(c) if isinstance(c, (OneToOne, TwoToTwo)) else frozenset(c)
    if not is_d_to_d(rel, q, 2):
        return False
    nbrs: dict[int, set[int]] = defaultdict(set)
    for a, b in rel:
        nbrs[a].add(b)
    groups: dict[frozenset, list[int]] = defaultdict(list)
    for a, bs in nbrs.items():
        groups[frozenset(bs)].append(a)
    return all(len(lefts) == 2 for lefts in groups.values())


def block_form(c: Constraint | Iterable[tuple[int, int]], q: int) -> tuple[Permutation, Permutation]:
    """Permutations ``(s1, s2)`` with blocks ``{s1(2k), s1(2k+1)} x {s2(2k), s2(2k+1)}``.

    Blocks are listed by their smallest left label, labels inside a block in
    increasing order. Raises ``ValueError`` unless the relation is 2<->2.
    """
    rel = relation_of(c) if isinstance(c, (OneToOne, TwoToTwo)) else frozenset(c)
    if not is_2bi2(rel, q):
        raise ValueError("relation is not a disjoint union of K_{2,2} blocks")
    nbrs: dict[int, set[int]] = defaultdict(set)
    for a, b in rel:
        nbrs[a].add(b)
    s1: list[int] = []
    s2: list[int] = []
    done: set[int] = set()
    for a in range(q):
        if a in done:
            continue
        rights = sorted(nbrs[a])
        lefts = sorted(x for x in range(q) if nbrs[x] == nbrs[a])
        done.update(lefts)
        s1 += lefts
        s2 += rights
    return tuple(s1), tuple(s2)


def relation_of_block_form(s1: Sequence[int], s2: Sequence[int]) -> Relation:
    q = len(s1)
    return frozenset(
        (s1[2 * kap + i1], s2[2 * kap + i2])
        for kap in range(q // 2)
        for i1 in (0, 1)
        for i2 in (0, 1)
    )


# ---------------------------------------------------------------- games


Edge = tuple[int, int, Constraint]


@dataclass(frozen=True)
class Game:
    num_vertices: int
    q: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        for i, (u, v, c) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"edge {i} is a self-loop on {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge {i} ({u}, {v}) has an endpoint outside the vertex set")
            if alphabet_size(c) != self.q:
                raise ValueError(f"edge {i} constraint is over {alphabet_size(c)} labels, q={self.q}")

    def relations(self) -> list[Relation]:
        return [relation_of(c) for _, _, c in self.edges]

    def satisfied(self, colouring: Sequence[int]) -> list[bool]:
        return [(colouring[u], colouring[v]) in relation_of(c) for u, v, c in self.edges]

    def to_json(self, weights: Sequence[Fraction] | None = None) -> dict:
        edges = []
        for u, v, c in self.edges:
            if isinstance(c, OneToOne):
                edges.append({"u": u, "v": v, "kind": "1to1", "pi1": list(c.pi)})
            else:
                edges.append({"u": u, "v": v, "kind": "2to2", "pi1": list(c.pi1), "pi2": list(c.pi2)})
        out: dict = {"q": self.q, "vertices": self.num_vertices, "edges": edges}
        if weights is not None:
            out["weights"] = [frac_to_json(w) for w in weights]
        return out


@dataclass(frozen=True)
class WeightedGame:
    game: Game
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != len(self.game.edges):
            raise ValueError(f"{len(ws)} weights for {len(self.game.edges)} edges")
        if any(w <= 0 for w in ws):
            raise ValueError("edge weights must be positive")

    @property
    def tot(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def to_json(self) -> dict:
        return self.game.to_json(self.weights)

    @classmethod
    def uniform(cls, game: Game) -> "WeightedGame":
        return cls(game, tuple(Fraction(1) for _ in game.edges))


def game_from_json(data: dict) -> Game | WeightedGame:
    edges = []
    for e in data["edges"]:
        if e["kind"] == "1to1":
            c: Constraint = OneToOne(tuple(e["pi1"]))
        elif e["kind"] == "2to2":
            c = TwoToTwo(tuple(e["pi1"]), tuple(e["pi2"]))
        else:
            raise ValueError(f"unknown constraint kind {e['kind']!r}")
        edges.append((int(e["u"]), int(e["v"]), c))
    g = Game(int(data["vertices"]), int(data["q"]), tuple(edges))
    if "weights" in data:
        return WeightedGame(g, tuple(frac_from_json(w) for w in data["weights"]))
    return g


def dumps_game(g: Game | WeightedGame) -> str:
    return json.dumps(g.to_json()) + "\n"


def loads_game(text: str) -> Game | WeightedGame:
    return game_from_json(json.loads(text))


# ---------------------------------------------------------------- values


def _components(n: int, edges: Sequence[Edge]) -> list[list[int]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        parent[find(u)] = find(v)
    comps: dict[int, list[int]] = defaultdict(list)
    for x in range(n):
        comps[find(x)].append(x)
    return list(comps.values())


def _best_weight(
    verts: list[int], edges: list[tuple[int, int, np.ndarray, int]], q: int, budget: Budget
) -> int:
    """Largest integer weight of satisfied edges over colourings of ``verts``."""
    total_colourings = q ** len(verts)
    budget.require("colourings", total_colourings, "game value colourings")
    pos = {v: i for i, v in enumerate(verts)}
    big = sum(w for *_, w in edges) >= 2**62
    dtype = object if big else np.int64
    best = 0
    chunk = 1 << 16
    for start in range(0, total_colourings, chunk):
        idx = np.arange(start, min(start + chunk, total_colourings), dtype=np.int64)
        labels = [(idx // q**i) % q for i in range(len(verts))]
        score = np.zeros(idx.shape, dtype=dtype)
        for u, v, mat, w in edges:
            hit = mat[labels[pos[u]], labels[pos[v]]]
            score = score + (hit.astype(np.int64) * w if not big else hit.astype(object) * w)
        best = max(best, int(score.max()))
    return best


def _integer_weights(weights: Sequence[Fraction]) -> list[int]:
    den = reduce(lambda a, b: a * b // gcd(a, b), (w.denominator for w in weights), 1)
    ints = [int(w * den) for w in weights]
    g = reduce(gcd, ints, 0) or 1
    return [x // g for x in ints]


def weighted_value(wg: WeightedGame, budget: Budget | None = None) -> Fraction:
    """Exact optimum of the satisfied weight fraction over all colourings."""
    budget = budget or get_budget()
    g = wg.game
    if not g.edges:
        return Fraction(1)
    ints = _integer_weights(wg.weights)
    mats = []
    for _, _, c in g.edges:
        m = np.zeros((g.q, g.q), dtype=bool)
        for a, b in relation_of(c):
            m[a, b] = True
        mats.append(m)
    comps = _components(g.num_vertices, g.edges)
    # check the total work up front so a capacity error is raised before any search
    for comp in comps:
        budget.require("colourings", g.q ** len(comp), "game value colourings")
    comp_of = {v: i for i, comp in enumerate(comps) for v in comp}
    grouped: dict[int, list] = defaultdict(list)
    for (u, v, _), m, w in zip(g.edges, mats, ints):
        grouped[comp_of[u]].append((u, v, m, w))
    best = sum(_best_weight(comps[i], es, g.q, budget) for i, es in grouped.items())
    return Fraction(best, sum(ints))


def value(g: Game, budget: Budget | None = None) -> Fraction:
    return weighted_value(WeightedGame.uniform(g), budget)


def colouring_value(wg: WeightedGame, colouring: Sequence[int]) -> Fraction:
    if not wg.game.edges:
        return Fraction(1)
    got = sum((w for w, ok in zip(wg.weights, wg.game.satisfied(colouring)) if ok), Fraction(0))
    return got / wg.tot


def _mis_size(adj: list[int], candidates: int) -> int:
    """Maximum independent set size inside bitmask ``candidates``."""
    if candidates == 0:
        return 0
    v = (candidates & -candidates).bit_length() - 1
    if adj[v] & candidates == 0:
        return 1 + _mis_size(adj, candidates & ~(1 << v))
    rest = candidates & ~(1 << v)
    return max(_mis_size(adj, rest), 1 + _mis_size(adj, rest & ~adj[v]))


def irreg_value(g: Game, j: int, budget: Budget | None = None) -> Fraction:
    """Largest ``|X|/|V|`` such that some ``j``-set colouring satisfies every edge inside ``X``."""
    budget = budget or get_budget()
    if not 1 <= j <= g.q:
        raise PreconditionError(f"j={j} must be between 1 and q={g.q}")
    n = g.num_vertices
    if n == 0:
        return Fraction(1)
    budget.require("irreg_colourings", comb(g.q, j) ** n, "irregular value set colourings")
    subsets = [frozenset(s) for s in itertools.combinations(range(g.q), j)]
    rels = g.relations()
    best = 0
    for choice in itertools.product(range(len(subsets)), repeat=n):
        adj = [0] * n
        for (u, v, _), rel in zip(g.edges, rels):
            su, sv = subsets[choice[u]], subsets[choice[v]]
            if not any((a, b) in rel for a in su for b in sv):
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        best = max(best, _mis_size(adj, (1 << n) - 1))
        if best == n:
            break
    return Fraction(best, n)


def rounding_expectation(wg: WeightedGame, sets: Sequence[Iterable[int]]) -> Fraction:
    """Expected satisfied weight fraction when each ``v`` picks a label uniformly from ``sets[v]``."""
    sets = [tuple(s) for s in sets]
    if not wg.game.edges:
        return Fraction(1)
    total = Fraction(0)
    for (u, v, c), w in zip(wg.game.edges, wg.weights):
        rel = relation_of(c)
        hits = sum((a, b) in rel for a in sets[u] for b in sets[v])
        total += w * Fraction(hits, len(sets[u]) * len(sets[v]))
    return total / wg.tot


# ---------------------------------------------------------------- predicates


def _oriented(u: int, v: int, rel: Relation) -> tuple[tuple[int, int], Relation]:
    return ((u, v), rel) if u < v else ((v, u), transpose(rel))


def _by_pair(g: Game) -> dict[tuple[int, int], list[Relation]]:
    out: dict[tuple[int, int], list[Relation]] = defaultdict(list)
    for (u, v, _), rel in zip(g.edges, g.relations()):
        key, r = _oriented(u, v, rel)
        out[key].append(r)
    return out


def is_edge_consistent(g: Game) -> bool:
    return all(len(set(rels)) == 1 for rels in _by_pair(g).values())


def is_edge_distinct(g: Game) -> bool:
    return all(len(set(rels)) == len(rels) for rels in _by_pair(g).values())


def is_simple(g: Game) -> bool:
    return all(len(rels) == 1 for rels in _by_pair(g).values())


def simplify(g: Game | WeightedGame) -> Game:
    """Drop weights and repeated copies of the same constraint on a vertex pair."""
    game = g.game if isinstance(g, WeightedGame) else g
    seen: set[tuple[tuple[int, int], Relation]] = set()
    keep = []
    for (u, v, c), rel in zip(game.edges, game.relations()):
        key = _oriented(u, v, rel)
        if key not in seen:
            seen.add(key)
            keep.append((u, v, c))
    return Game(game.num_vertices, game.q, tuple(keep))


def directed_relations(g: Game) -> dict[tuple[int, int], Relation]:
    """``Phi(u, v)`` for both orientations of every edge of an edge-consistent game."""
    if not is_edge_consistent(g):
        raise PreconditionError("game is not edge consistent")
    out: dict[tuple[int, int], Relation] = {}
    for (u, v, _), rel in zip(g.edges, g.relations()):
        out[(u, v)] = rel
        out[(v, u)] = transpose(rel)
    return out


def check_transitive(g: Game) -> bool:
    """Every 1-to-1 ``Phi(u, v)`` composes with every ``Phi(v, w)`` into ``Phi(u, w)``."""
    phi = directed_relations(g)
    out_edges: dict[int, list[int]] = defaultdict(list)
    for u, v in phi:
        out_edges[u].append(v)
    for (u, v), rel in phi.items():
        if not is_d_to_d(rel, g.q, 1):
            continue
        for w in out_edges[v]:
            if w == u:
                continue
            if phi.get((u, w)) != compose(rel, phi[(v, w)]):
                return False
    return True


def relabel_vertices(g: Game, perm: Sequence[int]) -> Game:
    """Vertex ``v`` becomes ``perm[v]``."""
    return Game(g.num_vertices, g.q, tuple((perm[u], perm[v], c) for u, v, c in g.edges))


def expand_integer_weights(wg: WeightedGame, reduce_gcd: bool = True, budget: Budget | None = None) -> Game:
    """Unweighted multigraph with ``w(e)`` parallel copies of each edge.

    With ``reduce_gcd`` the weights are first divided by their common factor,
    which leaves every value unchanged.
    """
    budget = budget or get_budget()
    if any(w.denominator != 1 for w in wg.weights):
        raise PreconditionError("multigraph expansion needs integer weights")
    ints = [int(w) for w in wg.weights]
    if reduce_gcd and ints:
        d = reduce(gcd, ints)
        ints = [x // d for x in ints]
    budget.require("multigraph_edges", sum(ints), "multigraph expansion edges")
    edges = tuple(e for e, w in zip(wg.game.edges, ints) for _ in range(w))
    return Game(wg.game.num_vertices, wg.game.q, edges)


def random_game(
    rng: np.random.Generator,
    num_vertices: int,
    q: int,
    num_edges: int,
    kind: str = "mixed",
) -> Game:
    """Random game; ``kind`` is ``"1to1"``, ``"2to2"``, ``"2bi2"`` or ``"mixed"``."""
    if num_vertices < 2:
        raise PreconditionError("need at least two vertices for an edge")
    edges = []
    for _ in range(num_edges):
        u, v = (int(x) for x in rng.choice(num_vertices, 2, replace=False))
        k = kind if kind != "mixed" else ("1to1", "2to2")[int(rng.integers(0, 2))]
        if k == "1to1":
            c: Constraint = OneToOne(tuple(int(x) for x in rng.permutation(q)))
        elif k == "2to2":
            c = random_two_to_two(rng, q)
        elif k == "2bi2":
            s1 = tuple(int(x) for x in rng.permutation(q))
            s2 = tuple(int(x) for x in rng.permutation(q))
            c = constraint_from_relation(relation_of_block_form(s1, s2), q)
        else:
            raise ValueError(f"unknown constraint kind {k!r}")
        edges.append((u, v, c))
    return Game(num_vertices, q, tuple(edges))


def random_two_to_two(rng: np.random.Generator, q: int) -> TwoToTwo:
    if q < 2:
        raise PreconditionError("2-to-2 constraints need q >= 2")
    while True:
        p1 = tuple(int(x) for x in rng.permutation(q))
        p2 = tuple(int(x) for x in rng.permutation(q))
        if all(a != b for a, b in zip(p1, p2)):
            return TwoToTwo(p1, p2)

