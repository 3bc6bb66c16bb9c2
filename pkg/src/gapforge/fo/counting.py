"""Counting expressions compiled to formulas with a prescribed number of witnesses.

An expression ``e`` over anchor tuples ``x`` and ``y`` compiles to a formula
``w(x, y, z)`` with ``q`` fresh variables ``z`` such that, under any
assignment to the anchors, exactly ``e(x, y)`` assignments to ``z`` satisfy
it. The elements bound to ``ctx.zero`` and ``ctx.one`` act as the bits 0 and
1 and must be distinct.

Composition:

* ``One``: ``z = 0`` (width 1); ``Indicator(phi)``: ``z = 0 and phi``.
* ``Product(a, b)``: the two formulas on disjoint ``z`` blocks, width ``qa + qb``.
* ``Sum(a, b)`` with ``qa <= qb``: a selector bit picks a branch, the shorter
  branch is padded with zeros, width ``1 + qb``.
* ``CardEq``: ``(z1 = 0 and Eq0(z2, z3, z4)) or (z1 = 1 and Eq1(z2, z3, z4))``.
* ``NuCount`` and ``PairCount`` delegate to a KMS formula provider.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Protocol, Sequence

from gapforge.errors import PreconditionError
from gapforge.fo.evaluate import Evaluator
from gapforge.fo.formulas import (
    FALSE,
    Formula,
    Fresh,
    atom,
    conj,
    disj,
    eq,
    free_vars,
    rename,
)
from gapforge.fo.structures import Structure


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Indicator:
    phi: Formula


@dataclass(frozen=True)
class Sum:
    left: "CountingExpr"
    right: "CountingExpr"


@dataclass(frozen=True)
class Product:
    left: "CountingExpr"
    right: "CountingExpr"


@dataclass(frozen=True)
class CardEq:
    """Number of equations, ``|Eq0| + |Eq1|``."""


@dataclass(frozen=True)
class NuCount:
    """Indicator that the anchor node has exactly ``r`` classes with ``f`` useful equations."""

    f: int
    r: int
    side: str = "x"


@dataclass(frozen=True)
class PairCount:
    """``|{(U, L, L') : (U, L) in clique(x), (U, L') in clique(y), 2-to-2 joined}|``."""


CountingExpr = One | Indicator | Sum | Product | CardEq | NuCount | PairCount


class KmsProvider(Protocol):
    def nu_exact(self, f: int, r: int, node: Sequence[str], zero: str, one: str) -> Formula: ...
    def pair_count(self, x: Sequence[str], y: Sequence[str], z: Sequence[str], zero: str, one: str) -> Formula: ...
    def pair_width(self) -> int: ...


class KmsOracle(Protocol):
    def nu(self, f: int, node: tuple) -> int: ...
    def pairs(self, x: tuple, y: tuple) -> int: ...


@dataclass(frozen=True)
class CountingContext:
    zero: str
    one: str
    x: tuple[str, ...] = ()
    y: tuple[str, ...] = ()
    kms: Any = None   # KmsProvider, needed for NuCount / PairCount


@dataclass(frozen=True)
class Compiled:
    formula: Formula
    zvars: tuple[str, ...]

    @property
    def width(self) -> int:
        return len(self.zvars)


def constant(n: int) -> CountingExpr:
    """Expression with value ``n`` built from ``One`` by doubling and adding."""
    if n < 0:
        raise ValueError("constants must be nonnegative")
    if n == 0:
        return Indicator(FALSE)
    if n == 1:
        return One()
    half = Product(Sum(One(), One()), constant(n // 2))
    return Sum(half, One()) if n % 2 else half


def width(e: CountingExpr, ctx: CountingContext | None = None) -> int:
    if isinstance(e, (One, Indicator, NuCount)):
        return 1
    if isinstance(e, CardEq):
        return 4
    if isinstance(e, Product):
        return width(e.left, ctx) + width(e.right, ctx)
    if isinstance(e, Sum):
        return 1 + max(width(e.left, ctx), width(e.right, ctx))
    if isinstance(e, PairCount):
        if ctx is None or ctx.kms is None:
            raise PreconditionError("PairCount needs a KMS formula provider")
        return ctx.kms.pair_width()
    raise TypeError(f"not a counting expression: {e!r}")


def depth(e: CountingExpr) -> int:
    if isinstance(e, (Sum, Product)):
        return 1 + max(depth(e.left), depth(e.right))
    return 1


def compile_counting(e: CountingExpr, ctx: CountingContext, fresh: Fresh | None = None) -> Compiled:
    fresh = fresh or Fresh("_z")
    zero, one = ctx.zero, ctx.one
    if isinstance(e, One):
        z = fresh()
        return Compiled(eq(z, zero), (z,))
    if isinstance(e, Indicator):
        z = fresh()
        return Compiled(conj(eq(z, zero), e.phi), (z,))
    if isinstance(e, CardEq):
        z = tuple(fresh.many(4))
        f = disj(
            conj(eq(z[0], zero), atom("Eq0", *z[1:])),
            conj(eq(z[0], one), atom("Eq1", *z[1:])),
        )
        return Compiled(f, z)
    if isinstance(e, Product):
        a = compile_counting(e.left, ctx, fresh)
        b = compile_counting(e.right, ctx, fresh)
        return Compiled(conj(a.formula, b.formula), a.zvars + b.zvars)
    if isinstance(e, Sum):
        a = compile_counting(e.left, ctx, fresh)
        b = compile_counting(e.right, ctx, fresh)
        if a.width > b.width:
            a, b = b, a
        sel = fresh("s")
        # rename both branches onto one shared block of width qb
        block = tuple(fresh.many(b.width))
        fa = _rebind(a.formula, a.zvars, block[: a.width])
        fb = _rebind(b.formula, b.zvars, block)
        pad = conj(*(eq(v, zero) for v in block[a.width :]))
        f = disj(conj(eq(sel, zero), fa, pad), conj(eq(sel, one), fb))
        return Compiled(f, (sel,) + block)
    if isinstance(e, NuCount):
        if ctx.kms is None:
            raise PreconditionError("NuCount needs a KMS formula provider")
        node = ctx.x if e.side == "x" else ctx.y
        z = fresh()
        return Compiled(conj(eq(z, zero), ctx.kms.nu_exact(e.f, e.r, node, zero, one)), (z,))
    if isinstance(e, PairCount):
        if ctx.kms is None:
            raise PreconditionError("PairCount needs a KMS formula provider")
        z = tuple(fresh.many(ctx.kms.pair_width()))
        return Compiled(ctx.kms.pair_count(ctx.x, ctx.y, z, zero, one), z)
    raise TypeError(f"not a counting expression: {e!r}")


def _rebind(f: Formula, old: Sequence[str], new: Sequence[str]) -> Formula:
    return rename(f, dict(zip(old, new))) if tuple(old) != tuple(new) else f


def evaluate_counting(
    e: CountingExpr,
    A: Structure,
    env: Mapping[str, Any],
    ctx: CountingContext,
    oracle: KmsOracle | None = None,
    _ev: Evaluator | None = None,
) -> int:
    """Arithmetic value of ``e``, computed directly (no compiled formula)."""
    ev = _ev or Evaluator(A)
    if isinstance(e, One):
        return 1
    if isinstance(e, Indicator):
        return int(ev.evaluate(e.phi, env))
    if isinstance(e, CardEq):
        return len(A.relations.get("Eq0", ())) + len(A.relations.get("Eq1", ()))
    if isinstance(e, Sum):
        return evaluate_counting(e.left, A, env, ctx, oracle, ev) + evaluate_counting(e.right, A, env, ctx, oracle, ev)
    if isinstance(e, Product):
        a = evaluate_counting(e.left, A, env, ctx, oracle, ev)
        return a * evaluate_counting(e.right, A, env, ctx, oracle, ev) if a else 0
    if isinstance(e, NuCount):
        if oracle is None:
            raise PreconditionError("NuCount needs a KMS oracle")
        node = tuple(env[v] for v in (ctx.x if e.side == "x" else ctx.y))
        return int(oracle.nu(e.f, node) == e.r)
    if isinstance(e, PairCount):
        if oracle is None:
            raise PreconditionError("PairCount needs a KMS oracle")
        return oracle.pairs(tuple(env[v] for v in ctx.x), tuple(env[v] for v in ctx.y))
    raise TypeError(f"not a counting expression: {e!r}")


def count_compiled(A: Structure, c: Compiled, env: Mapping[str, Any], budget=None) -> int:
    """Satisfying assignments to ``c.zvars`` with the anchors fixed by ``env``."""
    if set(c.zvars) & set(env):
        raise PreconditionError("anchor assignment binds a witness variable")
    missing = free_vars(c.formula) - set(c.zvars) - set(env)
    if missing:
        raise PreconditionError(f"anchors missing for {sorted(missing)}")
    return Evaluator(A, budget).count(c.formula, c.zvars, env)


__all__ = [
    "CardEq",
    "Compiled",
    "CountingContext",
    "CountingExpr",
    "Indicator",
    "NuCount",
    "One",
    "PairCount",
    "Product",
    "Sum",
    "compile_counting",
    "constant",
    "count_compiled",
    "depth",
    "evaluate_counting",
    "width",
]
