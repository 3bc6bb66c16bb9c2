"""Conversions between instances / games / graphs and relational structures.

Vocabularies used:

* 3XOR: ternary ``Eq0`` and ``Eq1`` over the variables.
* transitive game: one binary relation per constraint symbol, both
  orientations present (the reverse pair carries the transposed constraint).
* game with first-class constraints: vertices ``0..n-1`` and one element per
  constraint ``n..n+m-1``; unary ``C`` marks constraints and a ternary
  relation per symbol holds ``(u, v, c)``.
* graph: binary symmetric ``E``; digraph: binary ``A``.

Constraint symbols: ``P.0.2.1`` for the permutation ``(0, 2, 1)`` and
``D.0.1|1.0`` for the 2-to-2 constraint with permutation pair
``((0, 1), (1, 0))``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from gapforge.errors import VocabularyError
from gapforge.fo.structures import Structure
from gapforge.games import (
    Constraint,
    Game,
    OneToOne,
    TwoToTwo,
    constraint_from_relation,
    relation_of,
    transpose,
)
from gapforge.xor3 import Xor3Instance


def perm_symbol(pi: Sequence[int]) -> str:
    return "P." + ".".join(map(str, pi))


def constraint_symbol(c: Constraint) -> str:
    if isinstance(c, OneToOne):
        return perm_symbol(c.pi)
    return "D." + ".".join(map(str, c.pi1)) + "|" + ".".join(map(str, c.pi2))


def parse_symbol(name: str) -> Constraint:
    if name.startswith("P."):
        return OneToOne(tuple(int(x) for x in name[2:].split(".")))
    if name.startswith("D."):
        a, b = name[2:].split("|")
        return TwoToTwo(tuple(int(x) for x in a.split(".")), tuple(int(x) for x in b.split(".")))
    raise VocabularyError(f"not a constraint symbol: {name!r}")


def one_to_one_symbols(q: int) -> list[str]:
    return [perm_symbol(p) for p in itertools.permutations(range(q))]


def two_to_two_symbols(q: int) -> list[str]:
    out = []
    for p1 in itertools.permutations(range(q)):
        for p2 in itertools.permutations(range(q)):
            if all(a != b for a, b in zip(p1, p2)):
                out.append(constraint_symbol(TwoToTwo(p1, p2)))
    return out


def all_symbols(q: int) -> list[str]:
    return one_to_one_symbols(q) + (two_to_two_symbols(q) if q >= 2 else [])


# ---------------------------------------------------------------- 3XOR


def xor3_structure(inst: Xor3Instance) -> Structure:
    rels: dict[str, set] = {"Eq0": set(), "Eq1": set()}
    for x, y, z, b in inst.equations:
        rels[f"Eq{b}"].add((x, y, z))
    return Structure.build(range(inst.num_vars), rels, {"Eq0": 3, "Eq1": 3})


def structure_to_xor3(A: Structure) -> Xor3Instance:
    index = {e: i for i, e in enumerate(A.universe)}
    eqs = []
    for b in (0, 1):
        for t in sorted(A.relations.get(f"Eq{b}", ()), key=lambda t: tuple(index[e] for e in t)):
            eqs.append((index[t[0]], index[t[1]], index[t[2]], b))
    return Xor3Instance(len(A.universe), tuple(eqs))


# ---------------------------------------------------------------- games


def canonical(c: Constraint, q: int) -> Constraint:
    return constraint_from_relation(relation_of(c, q), q)


def transitive_game_structure(g: Game, symbols: Iterable[str] | None = None) -> Structure:
    """Binary form, both orientations, symbols of canonical representatives."""
    rels: dict[str, set] = {s: set() for s in (symbols if symbols is not None else all_symbols(g.q))}
    for u, v, c in g.edges:
        fwd = canonical(c, g.q)
        back = constraint_from_relation(transpose(relation_of(c, g.q)), g.q)
        rels.setdefault(constraint_symbol(fwd), set()).add((u, v))
        rels.setdefault(constraint_symbol(back), set()).add((v, u))
    return Structure.build(range(g.num_vertices), rels, {s: 2 for s in rels})


def game_structure(g: Game, symbols: Iterable[str] | None = None) -> Structure:
    """Constraints as elements; representatives kept exactly as stored."""
    n = g.num_vertices
    rels: dict[str, set] = {s: set() for s in (symbols if symbols is not None else all_symbols(g.q))}
    rels["C"] = set()
    for j, (u, v, c) in enumerate(g.edges):
        rels["C"].add((n + j,))
        rels.setdefault(constraint_symbol(c), set()).add((u, v, n + j))
    arities = {s: (1 if s == "C" else 3) for s in rels}
    return Structure.build(range(n + len(g.edges)), rels, arities)


def structure_to_game(A: Structure, q: int) -> Game:
    """Inverse of :func:`game_structure` (vertices are the non-``C`` elements)."""
    cons = {t[0] for t in A.relations.get("C", ())}
    verts = [e for e in A.universe if e not in cons]
    vid = {e: i for i, e in enumerate(verts)}
    order = {e: i for i, e in enumerate(A.universe)}
    found = []
    for name, tuples in A.relations.items():
        if name == "C":
            continue
        c = parse_symbol(name)
        for u, v, e in tuples:
            found.append((order[e], vid[u], vid[v], c))
    found.sort(key=lambda t: t[0])
    return Game(len(verts), q, tuple((u, v, c) for _, u, v, c in found))


# ---------------------------------------------------------------- graphs


def graph_structure(n: int, edges: Iterable[tuple[int, int]]) -> Structure:
    rel = set()
    for u, v in edges:
        rel.add((u, v))
        rel.add((v, u))
    return Structure.build(range(n), {"E": rel}, {"E": 2})


def digraph_structure(n: int, arcs: Iterable[tuple[int, int]]) -> Structure:
    return Structure.build(range(n), {"A": set(map(tuple, arcs))}, {"A": 2})
