"""Applying d-dimensional first-order interpretations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from gapforge.budget import Budget, get_budget
from gapforge.errors import InterpretationError, VocabularyError
from gapforge.fo.evaluate import UNBOUND, Evaluator
from gapforge.fo.formulas import And, Eq, Formula, Not, free_vars
from gapforge.fo.structures import Structure
from gapforge.seeding import as_rng, substream

Block = tuple[str, ...]


@dataclass(frozen=True)
class Interpretation:
    dim: int
    domain_vars: Block
    domain: Formula
    equiv: tuple[Block, Block, Formula] | None = None   # None means tuple equality
    relations: Mapping[str, tuple[tuple[Block, ...], Formula]] = field(default_factory=dict)
    constants: Mapping[str, tuple[Block, Formula]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        def check(block: Block, what: str) -> None:
            if len(block) != self.dim:
                raise VocabularyError(f"{what}: {len(block)} variables, dimension is {self.dim}")
            if len(set(block)) != len(block):
                raise VocabularyError(f"{what}: repeated variable")

        check(self.domain_vars, "domain")
        _check_scope(self.domain, set(self.domain_vars), "domain")
        if self.equiv is not None:
            xs, ys, f = self.equiv
            check(xs, "equiv x")
            check(ys, "equiv y")
            if set(xs) & set(ys):
                raise VocabularyError("equiv blocks share variables")
            _check_scope(f, set(xs) | set(ys), "equiv")
        for name, (blocks, f) in self.relations.items():
            for b in blocks:
                check(b, f"relation {name}")
            allv = [v for b in blocks for v in b]
            if len(set(allv)) != len(allv):
                raise VocabularyError(f"relation {name}: blocks share variables")
            _check_scope(f, set(allv), f"relation {name}")
        for name, (b, f) in self.constants.items():
            check(b, f"constant {name}")
            _check_scope(f, set(b), f"constant {name}")


def _check_scope(f: Formula, allowed: set[str], what: str) -> None:
    extra = free_vars(f) - allowed
    if extra:
        raise VocabularyError(f"{what} formula has undeclared free variables {sorted(extra)}")


@dataclass
class Applied:
    structure: Structure
    classes: list[list[tuple]]     # representatives of each element, first one canonical
    congruence: str                # "full" or "sampled"


def apply_interpretation(
    theta: Interpretation,
    A: Structure,
    budget: Budget | None = None,
    samples: int = 64,
    seed: int = 0,
) -> Applied:
    """Universe = domain tuples modulo ``equiv``; relations read off representatives.

    ``equiv`` must be an equivalence and a congruence for every defined
    relation and constant. Both are checked on every pair / combination when
    that number is within ``budget.congruence_checks``. Otherwise ``samples``
    random choices of the leading tuples are each checked against every
    tuple in the last position.
    """
    budget = budget or get_budget()
    ev = Evaluator(A, budget)
    rng = as_rng(substream(seed, "congruence"))
    tuples = [tuple(env[v] for v in theta.domain_vars) for env in ev.solutions(theta.domain, theta.domain_vars, {})]
    budget.require("fo_assignments", len(tuples), "interpretation domain tuples")
    full = True

    # quotient
    if theta.equiv is None:
        classes = [[t] for t in tuples]
        class_of = {t: i for i, t in enumerate(tuples)}
        cls = np.arange(len(tuples))
    else:
        xs, ys, ef = theta.equiv
        # each class is read off the row of its first tuple; every row checked
        # afterwards must then be exactly the indicator of its own class
        table = _Rows(ev, (xs, ys), tuples)
        cls = np.full(len(tuples), -1)
        classes = []
        for j, t in enumerate(tuples):
            if cls[j] >= 0:
                continue
            row = table.row(ef, (t,))
            if not row[j]:
                raise InterpretationError(f"equiv is not reflexive at {t}")
            members = np.flatnonzero(row)
            if (cls[members] >= 0).any():
                raise InterpretationError(f"equiv is not an equivalence relation at {t}")
            cls[members] = len(classes)
            classes.append([tuples[m] for m in members])
        class_of = {t: int(c) for t, c in zip(tuples, cls)}
        prefixes = None
        if len(tuples) ** 2 > budget.congruence_checks:
            full = False
            prefixes = _sample_prefixes(rng, tuples, 1, samples)
        for (a,), row in table.rows(ef, prefixes):
            bad = np.flatnonzero(row != (cls == class_of[a]))
            if bad.size:
                raise InterpretationError(f"equiv is not an equivalence relation ({a}, {tuples[bad[0]]})")

    n = len(classes)
    reps = [c[0] for c in classes]
    relations: dict[str, frozenset[tuple]] = {}
    arities: dict[str, int] = {}
    for name, (blocks, f) in sorted(theta.relations.items()):
        arity = len(blocks)
        arities[name] = arity
        budget.require("fo_assignments", n**arity, f"relation {name} class combinations")

        rel = _relation_by_blocks(ev, f, blocks, reps)
        relations[name] = frozenset(rel)
        if theta.equiv is not None:
            prefixes = None
            if len(tuples) ** arity > budget.congruence_checks:
                full = False
                prefixes = _sample_prefixes(rng, tuples, arity - 1, samples)
            last: dict[tuple, np.ndarray] = {}     # classes of the leading tuples -> allowed last classes
            for key in rel:
                last.setdefault(key[:-1], np.zeros(n, dtype=bool))[key[-1]] = True
            none = np.zeros(n, dtype=bool)
            for prefix, row in _Rows(ev, blocks, tuples).rows(f, prefixes):
                want = last.get(tuple(class_of[t] for t in prefix), none)[cls]
                bad = np.flatnonzero(row != want)
                if bad.size:
                    combo = (*prefix, tuples[bad[0]])
                    raise InterpretationError(f"equiv is not a congruence for {name} at {combo}")

    constants = {}
    for name, (b, f) in sorted(theta.constants.items()):
        hits = {class_of[t] for t in tuples if ev.evaluate(f, dict(zip(b, t)))}
        if len(hits) != 1:
            raise InterpretationError(f"constant {name} picks {len(hits)} elements")
        (c,) = hits
        if any(not ev.evaluate(f, dict(zip(b, t))) for t in classes[c]):
            raise InterpretationError(f"constant {name} is not closed under equiv")
        constants[name] = c

    B = Structure(tuple(range(n)), relations, arities, constants)
    return Applied(B, classes, "full" if full else "sampled")


def _relation_by_blocks(ev: Evaluator, f: Formula, blocks: tuple[Block, ...], reps: list[tuple]) -> set[tuple]:
    """Class-index tuples whose representatives satisfy ``f``.

    Blocks are bound one at a time; a partial binding is dropped as soon as
    ``f`` is false under every completion.
    """
    out: set[tuple] = set()
    env: dict = {}
    chosen: list[int] = []

    def go(i: int) -> None:
        if i == len(blocks):
            if ev.peval(f, env):
                out.add(tuple(chosen))
            return
        for j, r in enumerate(reps):
            env.update(zip(blocks[i], r))
            if ev.peval(f, env) is not False:
                chosen.append(j)
                go(i + 1)
                chosen.pop()
        for v in blocks[i]:
            env.pop(v, None)

    go(0)
    return out


def _sample_prefixes(rng: np.random.Generator, tuples: list[tuple], width: int, samples: int) -> list[tuple]:
    return [tuple(tuples[int(i)] for i in row) for row in rng.integers(0, len(tuples), (samples, width))]


class _Rows:
    """Truth table of formulas with one domain tuple per block.

    A row fixes the tuples in all blocks but the last and lists the value for
    every tuple in the last block. Blocks are bound left to right and the
    formula is cut down to its residual after each one. In the last block
    the residual's equality literals are compared column-wise, and the rest
    is evaluated once per assignment to its free variables among the tuples
    still possible. Rows are shared between prefixes leaving equal residuals
    that read the same outer values.
    """

    def __init__(self, ev: Evaluator, blocks: tuple[Block, ...], tuples: list[tuple]) -> None:
        self.ev = ev
        self.blocks = blocks
        self.block = blocks[-1]
        self.tuples = tuples
        self.code = {e: i for i, e in enumerate(ev.universe)}
        self.matrix = np.array(
            [[self.code[e] for e in t] for t in tuples], dtype=np.intp
        ).reshape(len(tuples), len(self.block))
        self.column = {v: j for j, v in enumerate(self.block)}
        self._groups: dict[tuple, tuple[np.ndarray, list[int]]] = {}
        self._cache: dict[tuple, np.ndarray] = {}

    def _grouping(self, pos: tuple[int, ...]) -> tuple[np.ndarray, list[int]]:
        hit = self._groups.get(pos)
        if hit is None:
            index: dict[tuple, int] = {}
            inverse = [index.setdefault(tuple(t[j] for j in pos), len(index)) for t in self.tuples]
            firsts = [0] * len(index)
            for j in reversed(range(len(self.tuples))):
                firsts[inverse[j]] = j
            hit = self._groups[pos] = (np.array(inverse, dtype=np.intp), firsts)
        return hit

    def _side(self, term: str, env: dict):
        if term in self.column:
            return self.matrix[:, self.column[term]]
        value = self.ev.term_value(term, env)
        return None if value is UNBOUND else self.code[value]

    def _last(self, g: Formula, env: dict) -> np.ndarray:
        ev, block = self.ev, self.block
        fv = ev.free_vars(g)
        # the row depends only on the residual and the outer values it still reads
        key = (g, tuple(sorted((v, env[v]) for v in fv if v not in block)))
        row = self._cache.get(key)
        if row is not None:
            return row
        mask = np.ones(len(self.tuples), dtype=bool)
        rest = []
        for p in g.parts if isinstance(g, And) else (g,):
            neg = isinstance(p, Not) and isinstance(p.body, Eq)
            lit = p.body if neg else p
            if isinstance(lit, Eq):
                a, b = self._side(lit.left, env), self._side(lit.right, env)
                if a is not None and b is not None:
                    mask &= (a != b) if neg else (a == b)
                    continue
            rest.append(p)
        if rest and mask.any():
            h = rest[0] if len(rest) == 1 else And(tuple(rest))
            used = frozenset().union(*(ev.free_vars(p) for p in rest))
            inverse, firsts = self._grouping(tuple(j for j, v in enumerate(block) if v in used))
            vals = np.zeros(len(firsts), dtype=bool)
            for u in np.unique(inverse[mask]):
                env.update(zip(block, self.tuples[firsts[u]]))
                vals[u] = bool(ev.peval(h, env))
            for v in block:
                env.pop(v, None)
            mask &= vals[inverse]
        self._cache[key] = mask
        return mask

    def row(self, f: Formula, prefix: tuple) -> np.ndarray:
        env: dict = {}
        for b, t in zip(self.blocks, prefix):
            env.update(zip(b, t))
            f = self.ev.residual(f, env)
        return self._last(f, env)

    def rows(self, f: Formula, prefixes: list[tuple] | None = None):
        """Yield ``(prefix, row)`` for the given prefixes, or for all of them."""
        if prefixes is not None:
            for prefix in prefixes:
                yield prefix, self.row(f, prefix)
            return
        env: dict = {}
        chosen: list[tuple] = []
        last = len(self.blocks) - 1

        def go(i: int, g: Formula):
            if i == last:
                yield tuple(chosen), self._last(g, env)
                return
            for t in self.tuples:
                env.update(zip(self.blocks[i], t))
                chosen.append(t)
                yield from go(i + 1, self.ev.residual(g, env))
                chosen.pop()
            for v in self.blocks[i]:
                env.pop(v, None)

        yield from go(0, f)


def identity_interpretation(A: Structure) -> Interpretation:
    """One-dimensional interpretation copying every relation and constant."""
    from gapforge.fo.formulas import TRUE, atom, eq

    rels = {}
    for name, a in A.arities.items():
        blocks = tuple((f"x{i}",) for i in range(a))
        rels[name] = (blocks, atom(name, *(b[0] for b in blocks)))
    consts = {c: (("x",), eq("x", "@" + c)) for c in A.constants}
    return Interpretation(1, ("x",), TRUE, (("x",), ("y",), eq("x", "y")), rels, consts)
