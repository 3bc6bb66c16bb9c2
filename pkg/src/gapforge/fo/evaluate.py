"""Model checking and counting by backtracking search.

Variables are bound one at a time. After each binding the formula is
evaluated in three-valued logic (``None`` = undetermined) so that a branch is
cut as soon as the formula is false under every completion. Candidate values
for the next variable are narrowed from equalities and from relation tuples
matching the already bound positions.
"""

from __future__ import annotations

from typing import Iterator, Mapping, Sequence

from gapforge.budget import Budget, get_budget
from gapforge.errors import CapacityError, VocabularyError
from gapforge.fo.formulas import (
    And,
    Atom,
    FALSE,
    TRUE,
    Bottom,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Term,
    Top,
    free_vars,
    is_constant,
)
from gapforge.fo.structures import Element, Structure


class UnboundVariable(VocabularyError):
    """A free variable has no value in the assignment."""


class Evaluator:
    """Evaluation context for one structure, with lookup and quantifier caches."""

    def __init__(self, A: Structure, budget: Budget | None = None) -> None:
        self.A = A
        self.budget = budget or get_budget()
        self.universe = A.universe
        self._index: dict[tuple[str, tuple[int, ...]], dict[tuple, list[tuple]]] = {}
        self._free: dict[int, tuple[frozenset[str], Formula]] = {}
        self._memo: dict[tuple[int, tuple], bool] = {}
        self.steps = 0

    # ------------------------------------------------------------ helpers

    def free_vars(self, f: Formula) -> frozenset[str]:
        """Free variables of ``f``, cached per formula object."""
        return self._fv(f)

    def _fv(self, f: Formula) -> frozenset[str]:
        hit = self._free.get(id(f))
        if hit is None or hit[1] is not f:
            hit = (free_vars(f), f)
            self._free[id(f)] = hit
        return hit[0]

    def term_value(self, t: Term, env: Mapping[str, Element]):
        """Element a variable or constant denotes, or ``UNBOUND``."""
        return self._value(t, env)

    def _value(self, t: Term, env: Mapping[str, Element]):
        v = env.get(t, _UNBOUND)
        if v is _UNBOUND and is_constant(t):
            try:
                return self.A.constants[t[1:]]
            except KeyError:
                raise VocabularyError(f"unknown constant {t}") from None
        return v

    def _matching(self, rel: str, positions: tuple[int, ...], values: tuple) -> list[tuple]:
        key = (rel, positions)
        table = self._index.get(key)
        if table is None:
            if rel not in self.A.relations:
                raise VocabularyError(f"structure has no relation {rel!r}")
            table = {}
            for t in self.A.relations[rel]:
                table.setdefault(tuple(t[p] for p in positions), []).append(t)
            self._index[key] = table
        return table.get(values, [])

    # ------------------------------------------------------------ evaluation

    def peval(self, f: Formula, env: Mapping[str, Element]) -> bool | None:
        """Three-valued value of ``f`` under a partial assignment."""
        if isinstance(f, Atom):
            vals = [self._value(t, env) for t in f.terms]
            if all(v is not _UNBOUND for v in vals):
                rel = self.A.relations.get(f.rel)
                if rel is None:
                    raise VocabularyError(f"structure has no relation {f.rel!r}")
                return tuple(vals) in rel
            pos = tuple(i for i, v in enumerate(vals) if v is not _UNBOUND)
            if not self._matching(f.rel, pos, tuple(vals[i] for i in pos)):
                return False
            return None
        if isinstance(f, Eq):
            if f.left == f.right:
                return True
            a, b = self._value(f.left, env), self._value(f.right, env)
            if a is _UNBOUND or b is _UNBOUND:
                return None
            return a == b
        if isinstance(f, And):
            out: bool | None = True
            for p in f.parts:
                v = self.peval(p, env)
                if v is False:
                    return False
                if v is None:
                    out = None
            return out
        if isinstance(f, Or):
            out = False
            for p in f.parts:
                v = self.peval(p, env)
                if v is True:
                    return True
                if v is None:
                    out = None
            return out
        if isinstance(f, Not):
            v = self.peval(f.body, env)
            return None if v is None else not v
        if isinstance(f, (Exists, Forall)):
            fv = self._fv(f)
            if any(x not in env for x in fv):
                return None
            key = (id(f), tuple(sorted((x, env[x]) for x in fv)))
            hit = self._memo.get(key)
            if hit is None:
                inner = dict(env)
                if isinstance(f, Exists):
                    hit = next(self.solutions(f.body, f.vars, inner), None) is not None
                else:
                    hit = next(self.solutions(Not(f.body), f.vars, inner), None) is None
                self._memo[key] = hit
            return hit
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        raise TypeError(f"not a formula: {f!r}")

    def residual(self, f: Formula, env: Mapping[str, Element], var: str | None = None) -> Formula:
        """``f`` with every part already decided under ``env`` folded away.

        Agrees with ``peval`` (TRUE / FALSE / undetermined) under ``env`` and
        every extension of it, and is usually much smaller, so a search can
        carry it down instead of re-reading the whole formula at each node.
        When ``f`` is already a residual and only ``var`` was bound since,
        parts not mentioning ``var`` are kept without a visit.
        """
        if var is not None and var not in self._fv(f):
            return f
        return self._residual(f, env, var)

    def _residual(self, f: Formula, env: Mapping[str, Element], var: str | None) -> Formula:
        cls = type(f)
        if cls is Eq:
            if f.left == f.right:
                return TRUE
            a, b = env.get(f.left, _UNBOUND), env.get(f.right, _UNBOUND)
            if a is _UNBOUND or b is _UNBOUND:
                if (a is _UNBOUND and f.left[0] == "@") or (b is _UNBOUND and f.right[0] == "@"):
                    return self._fold(f, env)
                return f
            return TRUE if a == b else FALSE
        if cls is And or cls is Or:
            absorbing, neutral = (FALSE, TRUE) if cls is And else (TRUE, FALSE)
            fv = self._fv
            keep = []
            changed = False
            for p in f.parts:
                if var is not None and var not in fv(p):
                    keep.append(p)
                    continue
                r = self._residual(p, env, var)
                if r is absorbing:
                    return absorbing
                if r is not p:
                    changed = True
                if r is not neutral:
                    keep.append(r)
            if not changed:
                return f
            if not keep:
                return neutral
            if len(keep) == 1:
                return keep[0]
            out = cls(tuple(keep))
            self._free[id(out)] = (frozenset().union(*(fv(p) for p in keep)), out)
            return out
        if cls is Not:
            r = self._residual(f.body, env, var)
            if r is TRUE:
                return FALSE
            if r is FALSE:
                return TRUE
            if r is f.body:
                return f
            out = Not(r)
            self._free[id(out)] = (self._fv(r), out)
            return out
        if cls is Exists or cls is Forall:
            inner = env
            if any(v in env for v in f.vars):
                inner = {k: x for k, x in env.items() if k not in f.vars}
            r = self._residual(f.body, inner, var)
            if r is TRUE or r is FALSE:
                return r
            if r is f.body:
                return self._fold(f, env)
            out = cls(f.vars, r)
            self._free[id(out)] = (self._fv(r) - frozenset(f.vars), out)
            return self._fold(out, env)
        return self._fold(f, env)

    def _fold(self, f: Formula, env: Mapping[str, Element]) -> Formula:
        v = self.peval(f, env)
        return f if v is None else (TRUE if v else FALSE)

    def forced(self, f: Formula, env: Mapping[str, Element]) -> dict[str, Element]:
        """Values that top-level equalities of ``f`` force on unbound variables.

        Any satisfying extension of ``env`` agrees with the returned map.
        """
        out: dict[str, Element] = {}
        for p in f.parts if isinstance(f, And) else (f,):
            if isinstance(p, Eq):
                a, b = self._value(p.left, env), self._value(p.right, env)
                if a is _UNBOUND and b is not _UNBOUND:
                    out[p.left] = b
                elif b is _UNBOUND and a is not _UNBOUND:
                    out[p.right] = a
        return out

    def candidates(self, f: Formula, var: str, env: Mapping[str, Element]) -> set | None:
        """Values of ``var`` that can still make ``f`` true; None = no restriction known.

        The set may be larger than needed but never misses a value.
        """
        cls = type(f)
        if cls is Bottom:
            return set()
        if var not in self._fv(f):
            return None
        if cls is Eq:
            if f.left == var and f.right != var:
                v = self._value(f.right, env)
                return None if v is _UNBOUND else {v}
            if f.right == var and f.left != var:
                v = self._value(f.left, env)
                return None if v is _UNBOUND else {v}
            return None
        if cls is Atom:
            where = [i for i, t in enumerate(f.terms) if t == var]
            vals = [self._value(t, env) for t in f.terms]
            pos = tuple(i for i, v in enumerate(vals) if v is not _UNBOUND)
            out = set()
            for t in self._matching(f.rel, pos, tuple(vals[i] for i in pos)):
                if all(t[i] == t[where[0]] for i in where):
                    out.add(t[where[0]])
            return out
        if cls is And:
            fv = self._fv
            out = None
            for p in f.parts:
                if var not in fv(p):
                    continue
                c = self.candidates(p, var, env)
                if c is not None:
                    out = c if out is None else out & c
                    if not out:
                        return out
            return out
        if cls is Or:
            out = set()
            for p in f.parts:
                c = self.candidates(p, var, env)
                if c is None:
                    if self.peval(p, env) is False:
                        continue
                    return None
                out |= c
            return out
        return None

    def solutions(
        self, f: Formula, vars: Sequence[str], env: dict[str, Element]
    ) -> Iterator[dict[str, Element]]:
        """Every extension of ``env`` to ``vars`` satisfying ``f`` (``env`` is reused)."""
        vars = list(vars)
        saved = {v: env.pop(v) for v in vars if v in env}
        try:
            yield from self._search(f, vars, 0, env)
        finally:
            for v in vars:
                env.pop(v, None)
            env.update(saved)

    def _search(self, f: Formula, vars: list[str], i: int, env: dict) -> Iterator[dict]:
        self.steps += 1
        if self.steps > self.budget.fo_assignments:
            raise CapacityError(f"formula search exceeded fo_assignments={self.budget.fo_assignments}")
        f = self.residual(f, env, vars[i - 1] if i else None)
        if isinstance(f, Bottom):
            return
        if i == len(vars):
            if not isinstance(f, Top):
                missing = sorted(x for x in self._fv(f) if x not in env)
                raise UnboundVariable(f"unbound variables {missing}")
            yield env
            return
        var = vars[i]
        cands = self.candidates(f, var, env)
        pool = self.universe if cands is None else [e for e in self.universe if e in cands]
        for e in pool:
            env[var] = e
            yield from self._search(f, vars, i + 1, env)
        env.pop(var, None)

    def evaluate(self, f: Formula, env: Mapping[str, Element]) -> bool:
        missing = [x for x in self._fv(f) if x not in env]
        if missing:
            raise UnboundVariable(f"unbound variables {sorted(missing)}")
        v = self.peval(f, env)
        assert v is not None
        return v

    def count(self, f: Formula, vars: Sequence[str], env: Mapping[str, Element] | None = None) -> int:
        n = 0
        for _ in self.solutions(f, vars, dict(env or {})):
            n += 1
        return n


class _Unbound:
    def __repr__(self) -> str:
        return "<unbound>"


_UNBOUND = _Unbound()
UNBOUND = _UNBOUND      # what ``term_value`` returns for a variable missing from the assignment


def evaluate(A: Structure, f: Formula, assignment: Mapping[str, Element] | None = None) -> bool:
    return Evaluator(A).evaluate(f, assignment or {})


def count_satisfying(
    A: Structure,
    f: Formula,
    free: Sequence[str],
    anchor: Mapping[str, Element] | None = None,
    budget: Budget | None = None,
) -> int:
    """Number of assignments to ``free`` (others fixed by ``anchor``) satisfying ``f``."""
    return Evaluator(A, budget).count(f, free, anchor)


def satisfying_tuples(
    A: Structure, f: Formula, free: Sequence[str], anchor: Mapping[str, Element] | None = None
) -> list[tuple]:
    ev = Evaluator(A)
    return [tuple(env[v] for v in free) for env in ev.solutions(f, free, dict(anchor or {}))]
