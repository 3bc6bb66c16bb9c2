"""Built-in interpretations and the direct reductions they should agree with.

Bits are coded by elements: inside a KMS node block ``u_{0,0}`` plays 0 and
``u_{0,1}`` plays 1; in the independent-set interpretation the first two
block entries do. A node block lists ``3k`` variables ``u``, then ``k``
right-hand-side bits ``r``, then ``2^{3k}`` membership bits ``b`` (``b_t`` is
1 iff the vector ``t`` lies in ``L*``).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from gapforge.budget import Budget
from gapforge.errors import CapacityError, ConsistencyError, PreconditionError
from gapforge.fo.adapters import (
    canonical,
    constraint_symbol,
    game_structure,
    graph_structure,
    one_to_one_symbols,
    parse_symbol,
    transitive_game_structure,
    two_to_two_symbols,
    xor3_structure,
)
from gapforge.fo.counting import (
    CardEq,
    CountingContext,
    CountingExpr,
    NuCount,
    One,
    PairCount,
    Product,
    Sum,
    compile_counting,
    constant,
)
from gapforge.fo.formulas import (
    TRUE,
    Formula,
    Fresh,
    all_equal,
    atom,
    conj,
    disj,
    eq,
    exists,
    iff,
    neg,
    neq,
    tuples_equal,
)
from gapforge.fo.interpret import Interpretation
from gapforge.fo.structures import Structure
from gapforge.games import Game, TwoToTwo, relation_of
from gapforge.gf2 import GF2Subspace, span
from gapforge.kms import (
    KmsParams,
    KmsVertex,
    build_transitive_game,
    canonical_L_collection,
    chi_of,
    clique_decomposition,
    constraint_between,
    nu_vector,
    overlap_pattern,
    pair_counts,
)
from gapforge.xor3 import Xor3Instance, regularize


def eq_any(a: str, b: str, c: str) -> Formula:
    return disj(atom("Eq0", a, b, c), atom("Eq1", a, b, c))


# ---------------------------------------------------------------- regularization


def regularization_interpretation() -> Interpretation:
    """4-dimensional: ``(v, v, v, v)`` is an original variable, ``(a_i, a1, a2, a3)`` a fresh copy.

    A fresh copy of position ``i`` of equation ``(a1, a2, a3)`` has first
    entry ``a_i``. Equation ``Eq_b(X, Y, Z)`` holds when the first entries
    satisfy ``Eq_b``, exactly one block is original, and the other two blocks
    carry that equation as their tail.
    """
    X = ("x0", "x1", "x2", "x3")
    Y = ("y0", "y1", "y2", "y3")
    Z = ("z0", "z1", "z2", "z3")

    def orig(T: Sequence[str]) -> Formula:
        return all_equal(*T)

    domain = disj(
        orig(X),
        conj(eq_any(X[1], X[2], X[3]), disj(*(eq(X[0], X[i]) for i in (1, 2, 3)))),
    )
    heads = (X[0], Y[0], Z[0])

    def tied(T: Sequence[str]) -> Formula:
        return conj(neg(orig(T)), *(eq(T[i + 1], heads[i]) for i in range(3)))

    relations = {}
    for b in (0, 1):
        cases = []
        for keep in range(3):
            blocks = (X, Y, Z)
            parts = [orig(blocks[keep])] + [tied(blocks[i]) for i in range(3) if i != keep]
            cases.append(conj(*parts))
        relations[f"Eq{b}"] = ((X, Y, Z), conj(atom(f"Eq{b}", *heads), disj(*cases)))
    return Interpretation(4, X, domain, None, relations)


# ---------------------------------------------------------------- KMS node blocks


@dataclass(frozen=True)
class NodeVars:
    u: tuple[str, ...]
    r: tuple[str, ...]
    b: tuple[str, ...]

    @property
    def flat(self) -> tuple[str, ...]:
        return self.u + self.r + self.b

    @property
    def zero(self) -> str:
        return self.u[0]

    @property
    def one(self) -> str:
        return self.u[1]

    @classmethod
    def named(cls, prefix: str, k: int) -> "NodeVars":
        return cls(
            tuple(f"{prefix}u{a}{i}" for a in range(k) for i in range(3)),
            tuple(f"{prefix}r{a}" for a in range(k)),
            tuple(f"{prefix}b{t}" for t in range(1 << (3 * k))),
        )

    @classmethod
    def split(cls, names: Sequence[str], k: int) -> "NodeVars":
        names = tuple(names)
        return cls(names[: 3 * k], names[3 * k : 4 * k], names[4 * k :])


def node_width(k: int) -> int:
    return 4 * k + (1 << (3 * k))


Key = tuple[GF2Subspace, GF2Subspace, tuple[int, ...], tuple[int, ...], frozenset]


def _overlap_choices(k: int):
    """Per position of ``U'``: no shared variable, one shared variable, or the same equation."""
    opts: list[tuple] = [("none",)]
    opts += [("share", a, i, j) for a in range(k) for i in range(3) for j in range(3)]
    opts += [("same", a) for a in range(k)]
    for combo in itertools.product(opts, repeat=k):
        used = [c[1] for c in combo if c[0] != "none"]
        if len(used) == len(set(used)):
            yield combo


@functools.lru_cache(maxsize=None)
def constraint_table(k: int, l: int, max_entries: int = 200_000) -> dict[str, tuple[Key, ...]]:
    """Constraint symbol -> every ``(L*, L'*, r, r', I)`` realising it.

    Each candidate pair is realised on a synthetic instance holding just the
    equations of ``U`` and ``U'``, with overlaps allowed by regularity (two
    equations share at most one variable unless equal, and no equation of one
    tuple meets two equations of the other).
    """
    params = KmsParams(k, l)
    Lcal = canonical_L_collection(params)
    choices = list(_overlap_choices(k))
    total = len(Lcal) ** 2 * len(choices) * 4**k
    if total > max_entries:
        raise CapacityError(f"constraint table needs {total} cases > {max_entries}")
    table: dict[str, list[Key]] = {}
    for r in itertools.product((0, 1), repeat=k):
        U_eqs = tuple((3 * a, 3 * a + 1, 3 * a + 2, r[a]) for a in range(k))
        for rp in itertools.product((0, 1), repeat=k):
            for combo in choices:
                if any(c[0] == "same" and rp[b] != r[c[1]] for b, c in enumerate(combo)):
                    continue
                nxt = 3 * k
                V_eqs = []
                for b, c in enumerate(combo):
                    if c[0] == "same":
                        V_eqs.append(U_eqs[c[1]])
                        continue
                    vs = [nxt, nxt + 1, nxt + 2]
                    nxt += 3
                    if c[0] == "share":
                        vs[c[3]] = 3 * c[1] + c[2]
                    V_eqs.append((*vs, rp[b]))
                ids = {e: i for i, e in enumerate(dict.fromkeys(U_eqs + tuple(V_eqs)))}
                for L1 in Lcal:
                    for L2 in Lcal:
                        a = KmsVertex(tuple(ids[e] for e in U_eqs), L1, U_eqs)
                        bv = KmsVertex(tuple(ids[e] for e in V_eqs), L2, tuple(V_eqs))
                        if a.U == bv.U and L1 == L2:
                            continue
                        try:
                            c = constraint_between(a, bv, nxt, k)
                        except ConsistencyError:
                            continue
                        if c is None:
                            continue
                        sym = constraint_symbol(canonical(c, params.q))
                        table.setdefault(sym, []).append((L1, L2, a.rhs, bv.rhs, overlap_pattern(a, bv)))
    return {s: tuple(v) for s, v in sorted(table.items())}


class KmsFormulas:
    """Formula pieces over ``tau_3XOR`` describing KMS nodes and their relations."""

    def __init__(self, k: int, l: int, psi: int = 1) -> None:
        self.k, self.l, self.psi = k, l, psi
        self.params = KmsParams(k, l)
        self.Lcal = canonical_L_collection(self.params)
        self.table = constraint_table(k, l)
        self.one_syms = [s for s in self.table if s.startswith("P.")]
        self.two_syms = [s for s in self.table if s.startswith("D.")]
        self.fresh = Fresh("_n")

    # -- single node

    def bits_are(self, n: NodeVars, L: GF2Subspace, zero: str, one: str) -> Formula:
        return conj(*(eq(v, one if t in L else zero) for t, v in enumerate(n.b)))

    def rhs_are(self, n: NodeVars, r: Sequence[int], zero: str, one: str) -> Formula:
        return conj(*(eq(v, one if bit else zero) for v, bit in zip(n.r, r)))

    def pi_U(self, n: NodeVars, zero: str | None = None, one: str | None = None) -> Formula:
        k = self.k
        zero = zero or n.zero
        one = one or n.one
        u = [n.u[3 * a : 3 * a + 3] for a in range(k)]
        parts = []
        for a in range(k):
            parts.append(disj(
                conj(atom("Eq0", *u[a]), eq(n.r[a], zero)),
                conj(atom("Eq1", *u[a]), eq(n.r[a], one)),
            ))
        parts += [neq(x, y) for x, y in itertools.combinations(n.u, 2)]
        for a, b in itertools.permutations(range(k), 2):
            for x in u[a]:
                for y in u[b]:
                    w = self.fresh("w")
                    trip = [atom(R, *p) for p in itertools.permutations((x, y, w)) for R in ("Eq0", "Eq1")]
                    parts.append(neg(exists([w], disj(*trip))))
        parts.append(disj(*(self.bits_are(n, L, zero, one) for L in self.Lcal)))
        return conj(*parts)

    # -- pairs of nodes

    def overlap_is(self, X: NodeVars, Y: NodeVars, I: frozenset) -> Formula:
        return conj(*(
            eq(x, y) if (p, q) in I else neq(x, y)
            for p, x in enumerate(X.u) for q, y in enumerate(Y.u)
        ))

    def pi_C(self, sym: str, X: NodeVars, Y: NodeVars, zx=None, ox=None, zy=None, oy=None) -> Formula:
        zx, ox = zx or X.zero, ox or X.one
        zy, oy = zy or Y.zero, oy or Y.one
        grouped: dict[tuple, list] = {}
        for L1, L2, r1, r2, I in self.table.get(sym, ()):
            grouped.setdefault((L1, L2), []).append((r1, r2, I))
        cases = []
        for (L1, L2), rest in grouped.items():
            inner = [
                conj(self.rhs_are(X, r1, zx, ox), self.rhs_are(Y, r2, zy, oy), self.overlap_is(X, Y, I))
                for r1, r2, I in rest
            ]
            cases.append(conj(self.bits_are(X, L1, zx, ox), self.bits_are(Y, L2, zy, oy), disj(*inner)))
        return disj(*cases)

    def c1(self, X: NodeVars, Y: NodeVars, *bits) -> Formula:
        return disj(*(self.pi_C(s, X, Y, *bits) for s in self.one_syms))

    def c2(self, X: NodeVars, Y: NodeVars, *bits) -> Formula:
        return disj(*(self.pi_C(s, X, Y, *bits) for s in self.two_syms))

    def in_clique(self, X: NodeVars, n: NodeVars, zero: str, one: str) -> Formula:
        # a node belongs to its own clique; the 1-to-1 relation alone misses it
        return disj(tuples_equal(X.flat, n.flat), self.c1(X, n, zero, one, zero, one))

    def useful(self, X: NodeVars, n: NodeVars, j: int) -> Formula:
        return disj(*(eq(n.u[3 * j + i], x) for i in range(3) for x in X.u))

    def diff(self, n1: NodeVars, n2: NodeVars, j: int) -> Formula:
        return disj(*(neq(n1.u[3 * j + i], n2.u[3 * j + i]) for i in range(3)), neq(n1.r[j], n2.r[j]))

    def nu_geq(self, f: int, r: int, X: NodeVars, zero: str, one: str) -> Formula:
        """At least ``r`` classes with ``f`` useful equations in ``X``'s clique."""
        if r <= 0:
            return TRUE
        k = self.k
        nodes = [NodeVars.split(self.fresh.many(node_width(k), "m"), k) for _ in range(r)]
        parts = []
        for n in nodes:
            parts.append(self.pi_U(n, zero, one))
            parts.append(self.in_clique(X, n, zero, one))
            parts.append(disj(*(
                conj(*(self.useful(X, n, j) if j in S else neg(self.useful(X, n, j)) for j in range(k)))
                for S in itertools.combinations(range(k), f)
            )))
        for n1, n2 in itertools.combinations(nodes, 2):
            parts.append(disj(
                *(neq(a, b) for a, b in zip(n1.b, n2.b)),
                *(neq(a, b) for a, b in zip(n1.r, n2.r)),
                *(conj(self.useful(X, n1, o), self.diff(n1, n2, o)) for o in range(k)),
                *(conj(self.useful(X, n2, o), self.diff(n1, n2, o)) for o in range(k)),
            ))
        return exists([v for n in nodes for v in n.flat], conj(*parts))

    def nu_exact(self, f: int, r: int, node: Sequence[str], zero: str, one: str) -> Formula:
        X = NodeVars.split(node, self.k)
        return conj(self.nu_geq(f, r, X, zero, one), neg(self.nu_geq(f, r + 1, X, zero, one)))

    # -- the pair count of the weight numerator

    def pair_width(self) -> int:
        return 4 * self.k + 2 * (1 << (3 * self.k))

    def pair_count(self, x, y, z, zero: str, one: str) -> Formula:
        k = self.k
        X, Y = NodeVars.split(x, k), NodeVars.split(y, k)
        B = 1 << (3 * k)
        z = tuple(z)
        n1 = NodeVars(z[: 3 * k], z[3 * k : 4 * k], z[4 * k : 4 * k + B])
        n2 = NodeVars(n1.u, n1.r, z[4 * k + B :])
        bits = (zero, one, zero, one)
        return conj(
            self.pi_U(n1, zero, one),
            self.pi_U(n2, zero, one),
            self.c2(n1, n2, *bits),
            self.in_clique(X, n1, zero, one),
            self.in_clique(Y, n2, zero, one),
        )

    # -- the approximate weight

    def chi_expr(self, v: Sequence[int]) -> CountingExpr:
        """``sum_f v_f |Eq|^(k - f)``."""
        terms: list[CountingExpr] = []
        for f, c in enumerate(v):
            if c == 0:
                continue
            t: CountingExpr = constant(c)
            for _ in range(self.k - f):
                t = Product(t, CardEq())
            terms.append(t)
        out = terms[0]
        for t in terms[1:]:
            out = Sum(out, t)
        return out

    def weight_expr(self, m: int) -> CountingExpr:
        """Pair count times, per endpoint, every nonzero ``chi(v)`` except that endpoint's own.

        ``m`` only decides which ``v`` have ``chi(v) = 0`` (those need ``v = 0``
        or ``m = 0``), so the expression is the same for every ``m >= 1``.
        """
        k = self.k
        vecs = [v for v in itertools.product(range(self.psi + 1), repeat=k + 1) if chi_of(v, m, k)]

        def side(s: str) -> CountingExpr:
            total: CountingExpr | None = None
            for v0 in vecs:
                term: CountingExpr = NuCount(0, v0[0], s)
                for f in range(1, k + 1):
                    term = Product(term, NuCount(f, v0[f], s))
                for v in vecs:
                    if v != v0:
                        term = Product(term, self.chi_expr(v))
                total = term if total is None else Sum(total, term)
            return total if total is not None else One()

        return Product(PairCount(), Product(side("x"), side("y")))


class KmsTupleOracle:
    """Direct arithmetic for node tuples: decodes ``(u, r, b)`` and reads the reduction."""

    def __init__(self, inst: Xor3Instance, k: int, l: int, zero, one, budget: Budget | None = None) -> None:
        self.tg = build_transitive_game(inst, KmsParams(k, l), budget)
        self.dec = clique_decomposition(self.tg.game)
        self.k, self.zero, self.one = k, zero, one
        self.eq_index = {e: i for i, e in enumerate(inst.equations)}
        self.counts = pair_counts(self.tg, self.dec)
        self._nu: dict[int, tuple[int, ...]] = {}

    def vertex(self, node: tuple) -> int:
        k = self.k
        u, r, b = node[: 3 * k], node[3 * k : 4 * k], node[4 * k :]
        bits = [{self.zero: 0, self.one: 1}[x] for x in r + b]
        U = tuple(self.eq_index[(*u[3 * a : 3 * a + 3], bits[a])] for a in range(k))
        L = span([t for t, bit in enumerate(bits[k:]) if bit], 3 * k)
        return self.tg.index[(U, L)]

    def node(self, x: int) -> tuple:
        v = self.tg.vertices[x]
        bit = (self.zero, self.one)
        return v.variables + tuple(bit[r] for r in v.rhs) + tuple(
            bit[t in v.Lstar] for t in range(1 << (3 * self.k))
        )

    def nu(self, f: int, node: tuple) -> int:
        x = self.vertex(node)
        if x not in self._nu:
            self._nu[x] = nu_vector(self.tg, self.dec, x)
        return self._nu[x][f]

    def pairs(self, x: tuple, y: tuple) -> int:
        cx, cy = (self.dec.clique_id[self.vertex(t)] for t in (x, y))
        return self.counts.get((cx, cy), 0)


# ---------------------------------------------------------------- KMS interpretations


def kms_transitive_interpretation(k: int, l: int) -> Interpretation:
    """Universe = KMS vertices coded as node blocks; one binary relation per constraint symbol."""
    kf = KmsFormulas(k, l)
    X, Y = NodeVars.named("x", k), NodeVars.named("y", k)
    relations = {s: ((X.flat, Y.flat), kf.pi_C(s, X, Y)) for s in kf.table}
    return Interpretation(node_width(k), X.flat, kf.pi_U(X), None, relations)


def kms_unweighted_pieces(k: int, l: int, psi: int, m: int = 1):
    """``Node`` and ``Constraint`` formulas of the unweighted game, plus the compiled weight.

    Layout of a universe tuple: node ``x`` (``4k + 2^{3k}``), the
    ``IsConstraint`` flag, node ``y``, then the identifier. Returns
    ``(vars, node, constraint, compiled_w)``.
    """
    kf = KmsFormulas(k, l, psi)
    X, Y = NodeVars.named("x", k), NodeVars.named("y", k)
    zero, one = X.zero, X.one
    ctx = CountingContext(zero, one, X.flat, Y.flat, kf)
    w = compile_counting(kf.weight_expr(m), ctx, Fresh("_id"))
    flag = "isc"
    vars_ = X.flat + (flag,) + Y.flat + w.zvars
    node = conj(eq(flag, zero), kf.pi_U(X), *(eq(v, zero) for v in Y.flat + w.zvars))
    constraint = conj(
        eq(flag, one), kf.pi_U(X), kf.pi_U(Y, zero, one), kf.c2(X, Y, zero, one, zero, one), w.formula
    )
    return vars_, node, constraint, w


# ---------------------------------------------------------------- unique games split


def ug_split_interpretation(q: int) -> Interpretation:
    """2-dimensional: ``(v, v)`` for a vertex, ``(c, u)`` for the copy of constraint ``c`` at endpoint ``u``.

    The copy at the first endpoint gets ``pi1``, the copy at the second ``pi2``.
    """
    twos = two_to_two_symbols(q)
    X, Y, Z = ("x1", "x2"), ("y1", "y2"), ("z1", "z2")
    w = "w"

    def on(c: str, a: str, b: str) -> Formula:
        return disj(*(atom(s, a, b, c) for s in twos))

    domain = disj(
        conj(neg(atom("C", X[0])), eq(X[0], X[1])),
        conj(atom("C", X[0]), exists([w], disj(on(X[0], X[1], w), on(X[0], w, X[1])))),
    )
    x, y, c, e = X[0], Y[0], Z[0], Z[1]
    relations = {"C": ((Z,), atom("C", Z[0]))}
    for p in one_to_one_symbols(q):
        first = [s for s in twos if parse_symbol(s).pi1 == parse_symbol(p).pi]
        second = [s for s in twos if parse_symbol(s).pi2 == parse_symbol(p).pi]
        body = conj(
            neg(atom("C", x)),
            neg(atom("C", y)),
            atom("C", c),
            disj(
                conj(eq(e, x), disj(*(atom(s, x, y, c) for s in first))),
                conj(eq(e, y), disj(*(atom(s, x, y, c) for s in second))),
            ),
        )
        relations[p] = ((X, Y, Z), body)
    return Interpretation(2, X, domain, None, relations)


# ---------------------------------------------------------------- independent set


def cloud_weight(q: int, P: int, Q: int, size: int) -> int:
    return P**size * (Q - P) ** (q - size)


def independent_set_interpretation(q: int, P: int, Q: int) -> Interpretation:
    """Dimension ``3 + q + Q^q``: bits, vertex, the set ``A``, a binary identifier below ``W(v, A)``.

    Two tuples are identified when they name the same vertex and code the same
    bit string. Adjacency needs a constraint on the two vertices, in either
    orientation, admitting no pair from ``A_x x A_y``.
    """
    if not 0 < P < Q:
        raise PreconditionError("need 0 < P < Q")
    M = Q**q
    twos = two_to_two_symbols(q)

    def block(p: str) -> tuple[str, ...]:
        return (f"{p}0", f"{p}1", f"{p}v") + tuple(f"{p}a{i}" for i in range(q)) + tuple(f"{p}d{j}" for j in range(M))

    X, Yb = block("x"), block("y")

    def parts(B):
        return B[0], B[1], B[2], B[3 : 3 + q], B[3 + q :]

    x0, x1, xv, xa, xd = parts(X)

    def less_than(ids: Sequence[str], bound: int) -> Formula:
        # ids[0] is the most significant bit
        bits = [(bound >> (M - 1 - j)) & 1 for j in range(M)]
        cases = []
        for j in range(M):
            if bits[j]:
                prefix = [eq(ids[i], x1 if bits[i] else x0) for i in range(j)]
                cases.append(conj(*prefix, eq(ids[j], x0)))
        return disj(*cases)

    w_vc = disj(*(
        conj(*(eq(xa[s], x1 if s in A else x0) for s in range(q)), less_than(xd, cloud_weight(q, P, Q, len(A))))
        for size in range(q + 1)
        for A in itertools.combinations(range(q), size)
    ))
    domain = conj(
        neq(x0, x1),
        neg(atom("C", xv)),
        *(disj(eq(t, x0), eq(t, x1)) for t in xa + xd),
        w_vc,
    )
    y0, y1, yv, ya, yd = parts(Yb)
    equiv = conj(eq(xv, yv), *(iff(eq(s, x0), eq(t, y0)) for s, t in zip(xa + xd, ya + yd)))

    def meets(sym: str, a: Sequence[str], one_a: str, b: Sequence[str], one_b: str) -> Formula:
        rel = relation_of(parse_symbol(sym), q)
        return disj(*(conj(eq(a[i], one_a), eq(b[j], one_b)) for i, j in sorted(rel)))

    z = "zc"
    edge = exists([z], conj(atom("C", z), disj(*(
        disj(
            conj(atom(s, xv, yv, z), neg(meets(s, xa, x1, ya, y1))),
            conj(atom(s, yv, xv, z), neg(meets(s, ya, y1, xa, x1))),
        )
        for s in twos
    ))))
    return Interpretation(3 + q + M, X, domain, (X, Yb, equiv), {"E": ((X, Yb), edge)})


# ---------------------------------------------------------------- catalog


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    source: str                                      # "xor3" or "game"
    build: Callable[..., Interpretation]
    direct: Callable[..., Structure]
    to_structure: Callable[..., Structure]
    about: str


def _direct_regularize(inst: Xor3Instance) -> Structure:
    return xor3_structure(regularize(inst))


def _direct_kms(inst: Xor3Instance, k: int, l: int, budget: Budget | None = None) -> Structure:
    tg = build_transitive_game(inst, KmsParams(k, l), budget)
    return transitive_game_structure(tg.game, symbols=constraint_table(k, l))


def _direct_ug(g: Game, q: int) -> Structure:
    from gapforge.derived import to_unique_games

    return game_structure(to_unique_games(g), symbols=one_to_one_symbols(q))


def _direct_is(g: Game, q: int, P: int, Q: int) -> Structure:
    from gapforge.derived import cloud_expand, to_independent_set

    graph = cloud_expand(to_independent_set(g, Fraction(P, Q)))
    return graph_structure(graph.n, graph.edges)


def _game_input(g: Game, q: int, **_) -> Structure:
    if any(not isinstance(c, TwoToTwo) for _, _, c in g.edges):
        raise PreconditionError("catalog game entries take all-2-to-2 games")
    return game_structure(g, symbols=two_to_two_symbols(q))


def builtin_interpretations() -> dict[str, CatalogEntry]:
    return {
        "regularize": CatalogEntry(
            "regularize", "xor3",
            lambda **_: regularization_interpretation(),
            lambda inst, **_: _direct_regularize(inst),
            lambda inst, **_: xor3_structure(inst),
            "3XOR to regular 3XOR, fresh copies of each equation's variables",
        ),
        "kms-transitive": CatalogEntry(
            "kms-transitive", "xor3",
            lambda k=1, l=0, **_: kms_transitive_interpretation(k, l),
            lambda inst, k=1, l=0, **_: _direct_kms(inst, k, l),
            lambda inst, **_: xor3_structure(inst),
            "regular 3XOR to the transitive game on (U, L) vertices",
        ),
        "ug-split": CatalogEntry(
            "ug-split", "game",
            lambda q=2, **_: ug_split_interpretation(q),
            lambda g, q=2, **_: _direct_ug(g, q),
            lambda g, q=2, **_: _game_input(g, q),
            "2-to-2 game to unique game, one permutation constraint per half",
        ),
        "independent-set": CatalogEntry(
            "independent-set", "game",
            lambda q=2, P=1, Q=3, **_: independent_set_interpretation(q, P, Q),
            lambda g, q=2, P=1, Q=3, **_: _direct_is(g, q, P, Q),
            lambda g, q=2, **_: _game_input(g, q),
            "2-to-2 game to the cloud-expanded independent-set graph",
        ),
    }


__all__ = [
    "CatalogEntry",
    "KmsFormulas",
    "KmsTupleOracle",
    "NodeVars",
    "builtin_interpretations",
    "cloud_weight",
    "constraint_table",
    "independent_set_interpretation",
    "kms_transitive_interpretation",
    "kms_unweighted_pieces",
    "node_width",
    "regularization_interpretation",
    "ug_split_interpretation",
]
