"""First-order formulas over relational vocabularies.

Terms are strings: a variable name, or ``@name`` for a constant symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

Term = str


def is_constant(t: Term) -> bool:
    return t.startswith("@")


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


@dataclass(frozen=True, slots=True)
class Atom:
    rel: str
    terms: tuple[Term, ...]


@dataclass(frozen=True, slots=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Exists:
    vars: tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    vars: tuple[str, ...]
    body: "Formula"


Formula = Union[Top, Bottom, Atom, Eq, Not, And, Or, Exists, Forall]
TRUE = Top()
FALSE = Bottom()


# ---------------------------------------------------------------- builders


def atom(rel: str, *terms: Term) -> Atom:
    return Atom(rel, tuple(terms))


def eq(a: Term, b: Term) -> Formula:
    return TRUE if a == b else Eq(a, b)


def neq(a: Term, b: Term) -> Formula:
    return Not(eq(a, b))


def neg(f: Formula) -> Formula:
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, Bottom):
        return TRUE
    if isinstance(f, Not):
        return f.body
    return Not(f)


def conj(*parts: Formula) -> Formula:
    """Conjunction, flattening nested ``And`` and dropping ``Top``."""
    out: list[Formula] = []
    for p in parts:
        if isinstance(p, Bottom):
            return FALSE
        if isinstance(p, Top):
            continue
        out.extend(p.parts if isinstance(p, And) else (p,))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*parts: Formula) -> Formula:
    out: list[Formula] = []
    for p in parts:
        if isinstance(p, Top):
            return TRUE
        if isinstance(p, Bottom):
            continue
        out.extend(p.parts if isinstance(p, Or) else (p,))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return disj(conj(a, b), conj(neg(a), neg(b)))


def exists(vars: Sequence[str], body: Formula) -> Formula:
    return Exists(tuple(vars), body) if vars else body


def forall(vars: Sequence[str], body: Formula) -> Formula:
    return Forall(tuple(vars), body) if vars else body


def tuples_equal(xs: Sequence[Term], ys: Sequence[Term]) -> Formula:
    return conj(*(eq(a, b) for a, b in zip(xs, ys, strict=True)))


def all_equal(*terms: Term) -> Formula:
    return conj(*(eq(terms[0], t) for t in terms[1:]))


# ---------------------------------------------------------------- analysis


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, Atom):
        return frozenset(t for t in f.terms if not is_constant(t))
    if isinstance(f, Eq):
        return frozenset(t for t in (f.left, f.right) if not is_constant(t))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - frozenset(f.vars)
    raise TypeError(f"not a formula: {f!r}")


def relation_symbols(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.rel}
    if isinstance(f, Not):
        return relation_symbols(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(relation_symbols(p) for p in f.parts))
    if isinstance(f, (Exists, Forall)):
        return relation_symbols(f.body)
    return set()


def size(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + size(f.body)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(p) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        return 1 + size(f.body)
    return 1


def rename(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Substitute free variables; bound variables shadow the mapping.

    Targets must not be captured by quantifiers inside ``f``; callers use
    fresh names for bound variables.
    """
    def sub(t: Term) -> Term:
        return mapping.get(t, t)

    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Atom):
        return Atom(f.rel, tuple(sub(t) for t in f.terms))
    if isinstance(f, Eq):
        return Eq(sub(f.left), sub(f.right))
    if isinstance(f, Not):
        return Not(rename(f.body, mapping))
    if isinstance(f, And):
        return And(tuple(rename(p, mapping) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(rename(p, mapping) for p in f.parts))
    if isinstance(f, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k not in f.vars}
        captured = set(f.vars) & set(inner.values())
        if captured:
            raise ValueError(f"renaming would capture {sorted(captured)}")
        return type(f)(f.vars, rename(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


class Fresh:
    """Supplies variable names that do not clash with user names."""

    def __init__(self, prefix: str = "_v") -> None:
        self.prefix = prefix
        self.n = 0

    def __call__(self, hint: str = "") -> str:
        self.n += 1
        return f"{self.prefix}{hint}{self.n}"

    def many(self, count: int, hint: str = "") -> list[str]:
        return [self(hint) for _ in range(count)]


def variables_in(terms: Iterable[Term]) -> list[str]:
    return [t for t in terms if not is_constant(t)]
