"""Regular 3XOR to transitive 2-to-2 game, then to a weighted 2-to-2 game.

Vertices are pairs ``(U, L*)``: ``U`` an admissible ordered ``k``-tuple of
equations and ``L*`` an ``l``-dimensional subspace of the canonical space
``F_2^{3k}`` meeting the fixed side-condition space ``H`` trivially. Variable
``i`` of the ``a``-th equation of ``U`` sits at canonical coordinate ``3a + i``,
so ``H`` is spanned by the vectors ``0b111 << 3a``.

Labels of a vertex are the ``2^l`` linear functionals on ``L* + H`` that give
``h_a`` the right-hand side of equation ``a``. Label ``i`` is the functional
whose values on the echelon basis of ``L*`` spell ``i`` in binary (first basis
vector most significant), which makes the numbering invariant under renaming
variables.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence


from gapforge.budget import Budget, get_budget
from gapforge.errors import ConsistencyError, PreconditionError
from gapforge.games import (
    Constraint,
    Game,
    OneToOne,
    TwoToTwo,
    WeightedGame,
    constraint_from_relation,
    is_2bi2,
    is_d_to_d,
)
from gapforge.gf2 import (
    GF2Subspace,
    LinearFunctional,
    enumerate_subspaces,
    extend_functional,
    parity,
    span,
    subspace_sum,
    trivially_intersects,
)
from gapforge.seeding import as_rng
from gapforge.xor3 import Equation, Xor3Instance, check_regular

EXACT = "exact"
APPROX = "approx-integer"


@dataclass(frozen=True)
class KmsParams:
    k: int
    l: int
    d: int = 6  # regularity bound used only for the class-count bound

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 0 or self.d < 1:
            raise ValueError("need k >= 1, l >= 0, d >= 1")
        if self.l > 3 * self.k - self.k:
            raise ValueError(f"l={self.l} exceeds the room 2k={2 * self.k} left beside H")

    @property
    def q(self) -> int:
        return 1 << self.l

    @property
    def dim(self) -> int:
        return 3 * self.k


@dataclass(frozen=True)
class KmsVertex:
    U: tuple[int, ...]                 # equation indices
    Lstar: GF2Subspace                 # subspace of F_2^{3k}
    equations: tuple[Equation, ...]    # the equations U names, in order

    @property
    def variables(self) -> tuple[int, ...]:
        """``u_{a,i}`` in canonical order: coordinate ``3a + i``."""
        return tuple(v for e in self.equations for v in e[:3])

    @property
    def rhs(self) -> tuple[int, ...]:
        return tuple(e[3] for e in self.equations)


# ---------------------------------------------------------------- tuples U


def _cooccur(inst: Xor3Instance) -> set[tuple[int, int]]:
    pairs = set()
    for x, y, z, _ in inst.equations:
        for a, b in itertools.permutations((x, y, z), 2):
            pairs.add((a, b))
    return pairs


def enumerate_U(inst: Xor3Instance, k: int) -> list[tuple[int, ...]]:
    """Ordered ``k``-tuples of equations with disjoint variables and no cross co-occurrence.

    Variables from two different equations of the tuple must not appear
    together in any equation of the instance. Lexicographic order.
    """
    co = _cooccur(inst)
    eq_vars = [set(e[:3]) for e in inst.equations]

    def compatible(i: int, j: int) -> bool:
        if eq_vars[i] & eq_vars[j]:
            return False
        return not any((a, b) in co for a in eq_vars[i] for b in eq_vars[j])

    ok = [[compatible(i, j) for j in range(inst.m)] for i in range(inst.m)]
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int]) -> None:
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for j in range(inst.m):
            if all(ok[i][j] for i in prefix):
                prefix.append(j)
                extend(prefix)
                prefix.pop()

    extend([])
    return out


# ---------------------------------------------------------------- canonical coordinates


def canonical_H(k: int) -> GF2Subspace:
    return span([0b111 << (3 * a) for a in range(k)], 3 * k)


def canonical_L_collection(params: KmsParams, budget: Budget | None = None) -> list[GF2Subspace]:
    """All ``l``-dimensional subspaces of ``F_2^{3k}`` meeting ``H`` only in 0."""
    H = canonical_H(params.k)
    return [L for L in enumerate_subspaces(params.dim, params.l, budget) if trivially_intersects(L, H)]


def canonical_embed(equations: Sequence[Equation]) -> dict[int, int]:
    """``mu_U`` on variables: variable -> canonical coordinate."""
    return {v: 3 * a + i for a, e in enumerate(equations) for i, v in enumerate(e[:3])}


def lift(v: int, variables: Sequence[int]) -> int:
    """Inverse embedding: canonical vector -> vector of ``F_2^X``."""
    out = 0
    c = 0
    while v:
        if v & 1:
            out |= 1 << variables[c]
        v >>= 1
        c += 1
    return out


def unlift(w: int, embed: dict[int, int]) -> int:
    out = 0
    x = 0
    while w:
        if w & 1:
            if x not in embed:
                raise PreconditionError(f"vector uses variable {x} outside X_U")
            out |= 1 << embed[x]
        w >>= 1
        x += 1
    return out


def side_condition_space(inst: Xor3Instance, U: Sequence[int]) -> tuple[GF2Subspace, list[tuple[int, int]]]:
    """``H_U`` inside ``F_2^X`` and the pins ``v_a -> b_a``."""
    vecs = []
    for a in U:
        x, y, z, b = inst.equations[a]
        vecs.append(((1 << x) | (1 << y) | (1 << z), b))
    return span([v for v, _ in vecs], inst.num_vars), vecs


def label_values(i: int, l: int) -> tuple[int, ...]:
    return tuple((i >> (l - 1 - t)) & 1 for t in range(l))


def label_index(values: Sequence[int]) -> int:
    out = 0
    for b in values:
        out = (out << 1) | b
    return out


def labels_of(vertex: KmsVertex, k: int) -> list[LinearFunctional]:
    """The ``2^l`` canonical labels, as functionals on ``L* + H`` in ``F_2^{3k}``."""
    H = canonical_H(k)
    Ls = vertex.Lstar
    target = subspace_sum(Ls, H)
    pins = [(0b111 << (3 * a), r) for a, r in enumerate(vertex.rhs)]
    out = []
    for i in range(1 << Ls.dim):
        ext = extend_functional(LinearFunctional(Ls, label_values(i, Ls.dim)), target, pins)
        if len(ext) != 1:
            raise ConsistencyError(f"label {i} of {vertex.U} has {len(ext)} extensions")
        out.append(ext[0])
    return out


# ---------------------------------------------------------------- constraints


def overlap_pattern(a: KmsVertex, b: KmsVertex) -> frozenset[tuple[int, int]]:
    """Pairs of canonical positions ``(3a+i, 3b+j)`` holding the same variable."""
    pos_b = {v: p for p, v in enumerate(b.variables)}
    return frozenset((p, pos_b[v]) for p, v in enumerate(a.variables) if v in pos_b)


def pair_key(a: KmsVertex, b: KmsVertex) -> tuple:
    """The data a constraint can depend on: ``(L*, L'*, r, r', overlap)``."""
    return (a.Lstar, b.Lstar, a.rhs, b.rhs, overlap_pattern(a, b))


@dataclass
class _Lifted:
    space: GF2Subspace                 # L + H_U inside F_2^X
    H: GF2Subspace                     # H_U inside F_2^X
    pins: list[tuple[int, int]]        # (v_a, b_a)
    labels: list[LinearFunctional]     # labels moved to F_2^X


def _lift_vertex(v: KmsVertex, n: int, k: int) -> _Lifted:
    variables = v.variables
    H = span([lift(0b111 << (3 * a), variables) for a in range(k)], n)
    L = span([lift(b, variables) for b in v.Lstar.basis], n)
    space = subspace_sum(L, H)
    embed = canonical_embed(v.equations)
    labels = []
    for f in labels_of(v, k):
        labels.append(LinearFunctional(space, tuple(f(unlift(w, embed)) for w in space.basis)))
    pins = [(lift(0b111 << (3 * a), variables), r) for a, r in enumerate(v.rhs)]
    return _Lifted(space, H, pins, labels)


def constraint_dims(a: KmsVertex, b: KmsVertex, n: int, k: int) -> tuple[int, int, int]:
    """``dim(L + H_U + H_U')``, ``dim(L' + H_U + H_U')`` and ``dim(L + L' + H_U + H_U')``."""
    la, lb = _lift_vertex(a, n, k), _lift_vertex(b, n, k)
    A = subspace_sum(la.space, lb.H)
    B = subspace_sum(lb.space, la.H)
    return A.dim, B.dim, subspace_sum(A, B).dim


def constraint_between(a: KmsVertex, b: KmsVertex, num_vars: int, k: int) -> Constraint | None:
    """1-to-1, 2-to-2 or no constraint between two vertices.

    The type comes from the three dimensions computed in ``F_2^X``. A label
    ``f`` of ``a`` is extended uniquely to ``A = L + H_U + H_U'`` (honouring
    the equations of ``U'``), likewise ``f'`` to ``B``; ``f ~ f'`` iff the two
    extensions agree on ``A ∩ B``, i.e. glue to a functional on ``A + B``.
    """
    if a.U == b.U and a.Lstar == b.Lstar:
        raise PreconditionError("constraint_between needs two distinct vertices")
    return _constraint_lifted(_lift_vertex(a, num_vars, k), _lift_vertex(b, num_vars, k))


def _constraint_lifted(la: _Lifted, lb: _Lifted) -> Constraint | None:
    A = subspace_sum(la.space, lb.H)
    B = subspace_sum(lb.space, la.H)
    S = subspace_sum(A, B)
    if A.dim == B.dim == S.dim:
        d = 1
    elif A.dim == B.dim == S.dim - 1:
        d = 2
    else:
        return None

    def extend_all(lv: _Lifted, target: GF2Subspace, other: _Lifted) -> list[LinearFunctional]:
        out = []
        for f in lv.labels:
            ext = extend_functional(f, target, other.pins)
            if len(ext) != 1:
                raise ConsistencyError(f"label has {len(ext)} extensions to L + H_U + H_U'")
            out.append(ext[0])
        return out

    fa, fb = extend_all(la, A, lb), extend_all(lb, B, la)
    rel = set()
    for i, F in enumerate(fa):
        for j, G in enumerate(fb):
            if extend_functional(F, S, zip(G.domain.basis, G.values)):
                rel.add((i, j))
    q = len(la.labels)
    if not is_d_to_d(rel, q, d):
        raise ConsistencyError(f"constraint expected to be {d}-to-{d}, got {sorted(rel)}")
    c = constraint_from_relation(rel, q)
    if d == 2 and not is_2bi2(rel, q):
        raise ConsistencyError("2-to-2 constraint is not a union of K_{2,2} blocks")
    return c


# ---------------------------------------------------------------- transitive game


@dataclass
class TransitiveGame:
    params: KmsParams
    instance: Xor3Instance
    tuples: list[tuple[int, ...]]
    Lcal: list[GF2Subspace]
    vertices: list[KmsVertex]
    game: Game
    index: dict[tuple[tuple[int, ...], GF2Subspace], int] = field(default_factory=dict)


def build_vertices(inst: Xor3Instance, params: KmsParams, budget: Budget | None = None):
    budget = budget or get_budget()
    budget.require("subspace_dim", params.dim, "canonical space dimension 3k")
    if not check_regular(inst, max(inst.occurrences().values(), default=0)):
        raise PreconditionError("instance is not regular: two equations share more than one variable")
    tuples = enumerate_U(inst, params.k)
    Lcal = canonical_L_collection(params, budget)
    budget.require("kms_vertices", len(tuples) * len(Lcal), "KMS vertex count")
    vertices = [
        KmsVertex(U, L, tuple(inst.equations[i] for i in U)) for U in tuples for L in Lcal
    ]
    return tuples, Lcal, vertices


def build_transitive_game(
    inst: Xor3Instance, params: KmsParams, budget: Budget | None = None, use_cache: bool = True
) -> TransitiveGame:
    """All vertices and every non-empty constraint, one edge per unordered pair."""
    tuples, Lcal, vertices = build_vertices(inst, params, budget)
    lifted = [_lift_vertex(v, inst.num_vars, params.k) for v in vertices]
    cache: dict[tuple, Constraint | None] = {}
    edges = []
    for i, j in itertools.combinations(range(len(vertices)), 2):
        if use_cache:
            key = pair_key(vertices[i], vertices[j])
            if key not in cache:
                cache[key] = _constraint_lifted(lifted[i], lifted[j])
            c = cache[key]
        else:
            c = _constraint_lifted(lifted[i], lifted[j])
        if c is not None:
            edges.append((i, j, c))
    game = Game(len(vertices), params.q, tuple(edges))
    index = {(v.U, v.Lstar): i for i, v in enumerate(vertices)}
    return TransitiveGame(params, inst, tuples, Lcal, vertices, game, index)


# ---------------------------------------------------------------- cliques


@dataclass(frozen=True)
class CliqueDecomposition:
    clique_id: tuple[int, ...]
    cliques: tuple[tuple[int, ...], ...]


def _edge_kinds(g: Game) -> dict[tuple[int, int], str]:
    out = {}
    for u, v, c in g.edges:
        kind = "1to1" if isinstance(c, OneToOne) else "2to2"
        out[(u, v)] = out[(v, u)] = kind
    return out


def clique_decomposition(g: Game) -> CliqueDecomposition:
    """Components of the 1-to-1 subgraph, checked to be cliques with uniform cross pairs."""
    parent = list(range(g.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, c in g.edges:
        if isinstance(c, OneToOne):
            parent[find(u)] = find(v)
    roots: dict[int, int] = {}
    cid = []
    for x in range(g.num_vertices):
        r = find(x)
        cid.append(roots.setdefault(r, len(roots)))
    cliques: list[list[int]] = [[] for _ in roots]
    for x, c in enumerate(cid):
        cliques[c].append(x)
    kinds = _edge_kinds(g)
    for members in cliques:
        for u, v in itertools.combinations(members, 2):
            if kinds.get((u, v)) != "1to1":
                raise ConsistencyError(f"vertices {u} and {v} share a 1-to-1 component but no 1-to-1 edge")
    # cross pairs between two cliques are all 2-to-2 or all absent
    cross: dict[tuple[int, int], int] = defaultdict(int)
    for (u, v), kind in kinds.items():
        if u < v and cid[u] != cid[v]:
            if kind != "2to2":
                raise ConsistencyError("1-to-1 edge between different cliques")
            cross[tuple(sorted((cid[u], cid[v])))] += 1
    for (ci, cj), count in cross.items():
        if count != len(cliques[ci]) * len(cliques[cj]):
            raise ConsistencyError(f"cliques {ci} and {cj} are only partly joined by 2-to-2 edges")
    return CliqueDecomposition(tuple(cid), tuple(tuple(c) for c in cliques))


def propagate_label(g: Game, dec: CliqueDecomposition, vertex: int, label: int) -> dict[int, int]:
    """Extend a label on ``vertex`` along the 1-to-1 edges of its clique."""
    pis: dict[tuple[int, int], tuple[int, ...]] = {}
    for u, v, c in g.edges:
        if isinstance(c, OneToOne):
            pis[(u, v)] = c.pi
            inv = [0] * len(c.pi)
            for s, t in enumerate(c.pi):
                inv[t] = s
            pis[(v, u)] = tuple(inv)
    out = {vertex: label}
    for w in dec.cliques[dec.clique_id[vertex]]:
        if w != vertex:
            out[w] = pis[(vertex, w)][label]
    return out


# ---------------------------------------------------------------- weights


def pair_counts(tg: TransitiveGame, dec: CliqueDecomposition) -> dict[tuple[int, int], int]:
    """``N(Ci, Cj) = |{(U, L, L') : (U, L) in Ci, (U, L') in Cj}|`` over joined clique pairs."""
    kinds = _edge_kinds(tg.game)
    by_U: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for i, v in enumerate(tg.vertices):
        by_U[v.U].append(i)
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for members in by_U.values():
        for x, y in itertools.permutations(members, 2):
            ci, cj = dec.clique_id[x], dec.clique_id[y]
            if ci != cj and kinds.get((x, y)) == "2to2":
                counts[(ci, cj)] += 1
    return dict(counts)


def exact_weights(tg: TransitiveGame, dec: CliqueDecomposition) -> dict[tuple[int, int], Fraction]:
    """Weight of every positive-weight cross-clique 2-to-2 pair ``(u, v)``, ``u < v``.

    The weight is ``N(Ci, Cj) / (|Ci| |Cj|)``; the constant normalisers of
    the sampling process are dropped.
    """
    counts = pair_counts(tg, dec)
    out = {}
    for u, v, c in tg.game.edges:
        ci, cj = dec.clique_id[u], dec.clique_id[v]
        if ci == cj or not isinstance(c, TwoToTwo):
            continue
        n = counts.get((ci, cj), 0)
        if n:
            out[(u, v)] = Fraction(n, len(dec.cliques[ci]) * len(dec.cliques[cj]))
    return out


def sample_weights(
    tg: TransitiveGame, dec: CliqueDecomposition, samples: int, seed=None
) -> tuple[dict[tuple[int, int], int], Fraction]:
    """Monte-Carlo run of the edge sampling process.

    Pick ``U`` uniformly; pick an ordered pair ``(L, L')`` uniformly among those
    whose vertices are joined by a 2-to-2 edge; pick ``(u, v)`` uniformly in
    ``Ci x Cj``. Returns ordered-pair hit counts and the constant that turns an
    exact weight into the sampling probability of one orientation.
    """
    rng = as_rng(seed)
    kinds = _edge_kinds(tg.game)
    by_U: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for i, v in enumerate(tg.vertices):
        by_U[v.U].append(i)
    per_U = []
    for U in tg.tuples:
        members = by_U[U]
        per_U.append([(x, y) for x, y in itertools.permutations(members, 2) if kinds.get((x, y)) == "2to2"])
    sizes = {len(p) for p in per_U}
    if len(sizes) != 1 or 0 in sizes:
        raise PreconditionError("2-to-2 pairs per tuple U are not uniform and positive")
    P = sizes.pop()
    hits: dict[tuple[int, int], int] = defaultdict(int)
    us = rng.integers(0, len(per_U), samples)
    ps = rng.integers(0, P, samples)
    for ui, pi in zip(us, ps):
        x, y = per_U[int(ui)][int(pi)]
        ci, cj = dec.cliques[dec.clique_id[x]], dec.cliques[dec.clique_id[y]]
        u = ci[int(rng.integers(0, len(ci)))]
        v = cj[int(rng.integers(0, len(cj)))]
        hits[(u, v)] += 1
    return dict(hits), Fraction(1, len(per_U) * P)


@dataclass
class WeightLedger:
    nu: list[tuple[int, ...]]                  # per vertex
    psi: int
    psi_bound: int
    chi: list[int]                             # chi(nu) per vertex
    clique_sizes: list[int]                    # per vertex, for comparison with chi
    exact_w: dict[tuple[int, int], Fraction]
    int_w: dict[tuple[int, int], int]
    gamma_sq: Fraction
    denominator_factors: int                   # number of chi values in the common denominator

    @property
    def gamma_upper(self) -> Fraction:
        """Rational upper bound on ``gamma = sqrt(gamma_sq)`` (exact when it is a square)."""
        return sqrt_upper(self.gamma_sq)

    def to_json(self) -> dict:
        from gapforge.jsonio import frac_to_json

        return {
            "nu": {str(i): list(v) for i, v in enumerate(self.nu)},
            "psi": self.psi,
            "psi_bound": self.psi_bound,
            "chi": {str(i): c for i, c in enumerate(self.chi)},
            "gamma": frac_to_json(self.gamma_upper),
            "gamma_sq": frac_to_json(self.gamma_sq),
            "denominator_factors": self.denominator_factors,
            "exact_w": {f"{u},{v}": frac_to_json(w) for (u, v), w in sorted(self.exact_w.items())},
            "int_w": {f"{u},{v}": str(w) for (u, v), w in sorted(self.int_w.items())},
        }


def sqrt_upper(x: Fraction, denominator: int = 10**6) -> Fraction:
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    # ceil(sqrt(x) * D) / D
    scaled = num * denominator * denominator
    r = math.isqrt(scaled // den)
    while Fraction(r * r, denominator * denominator) < x:
        r += 1
    return Fraction(r, denominator)


def useful_pattern(U_vars: set[int], other: KmsVertex) -> tuple[int, ...]:
    """Equation index at each position of ``other.U`` sharing a variable with ``U``, else -1."""
    return tuple(
        idx if set(e[:3]) & U_vars else -1 for idx, e in zip(other.U, other.equations)
    )


def nu_vector(tg: TransitiveGame, dec: CliqueDecomposition, x: int) -> tuple[int, ...]:
    """Counts of equivalence classes in ``x``'s clique by number of useful equations."""
    k = tg.params.k
    base = tg.vertices[x]
    U_vars = set(base.variables)
    classes: list[set] = [set() for _ in range(k + 1)]
    for y in dec.cliques[dec.clique_id[x]]:
        other = tg.vertices[y]
        pat = useful_pattern(U_vars, other)
        f = sum(1 for p in pat if p >= 0)
        classes[f].add((other.Lstar, pat, other.rhs))
    return tuple(len(c) for c in classes)


def chi_of(nu: Sequence[int], m: int, k: int) -> int:
    return sum(nu[f] * m ** (k - f) for f in range(k + 1))


def psi_bound(params: KmsParams) -> int:
    k = params.k
    return 2 ** (2 ** (3 * k)) * 2**k * 2**k * (3 * k * params.d) ** k


def approx_weights(
    tg: TransitiveGame, dec: CliqueDecomposition, exact: dict[tuple[int, int], Fraction] | None = None
) -> WeightLedger:
    """Integer weights from approximate clique sizes, and the distortion they cause.

    Clique sizes are replaced by ``chi(nu)``; ``int_w`` multiplies the pair
    count by every nonzero ``chi(v)``, ``v in {0..Psi}^{k+1}``, except the
    endpoint's own, once per endpoint.
    """
    k, m = tg.params.k, tg.instance.m
    exact = exact if exact is not None else exact_weights(tg, dec)
    nus = [nu_vector(tg, dec, x) for x in range(len(tg.vertices))]
    psi = max((max(v) for v in nus), default=0)
    chis = [chi_of(v, m, k) for v in nus]
    factors = {v: chi_of(v, m, k) for v in itertools.product(range(psi + 1), repeat=k + 1)}
    factors = {v: c for v, c in factors.items() if c != 0}
    full = math.prod(factors.values())
    counts = pair_counts(tg, dec)
    int_w = {}
    for (u, v), w in exact.items():
        n = counts[(dec.clique_id[u], dec.clique_id[v])]
        int_w[(u, v)] = n * (full // factors[nus[u]]) * (full // factors[nus[v]])
    ratios = [Fraction(int_w[e]) / w for e, w in exact.items()]
    gamma_sq = max(ratios) / min(ratios) if ratios else Fraction(1)
    return WeightLedger(
        nu=nus,
        psi=psi,
        psi_bound=psi_bound(tg.params),
        chi=chis,
        clique_sizes=[len(dec.cliques[c]) for c in dec.clique_id],
        exact_w=dict(exact),
        int_w=int_w,
        gamma_sq=gamma_sq,
        denominator_factors=len(factors),
    )


# ---------------------------------------------------------------- weighted game


@dataclass
class KmsReduction:
    transitive: TransitiveGame
    decomposition: CliqueDecomposition
    ledger: WeightLedger
    exact_game: WeightedGame
    approx_game: WeightedGame

    def weighted(self, scheme: str) -> WeightedGame:
        if scheme == EXACT:
            return self.exact_game
        if scheme == APPROX:
            return self.approx_game
        raise ValueError(f"unknown weighting scheme {scheme!r}")


def reduce_instance(inst: Xor3Instance, params: KmsParams, budget: Budget | None = None) -> KmsReduction:
    tg = build_transitive_game(inst, params, budget)
    dec = clique_decomposition(tg.game)
    exact = exact_weights(tg, dec)
    ledger = approx_weights(tg, dec, exact)
    constraint = {(u, v): c for u, v, c in tg.game.edges}
    pairs = sorted(exact)
    edges = tuple((u, v, constraint[(u, v)]) for u, v in pairs)
    g = Game(len(tg.vertices), params.q, edges)
    exact_game = WeightedGame(g, tuple(exact[p] for p in pairs))
    approx_game = WeightedGame(g, tuple(Fraction(ledger.int_w[p]) for p in pairs))
    return KmsReduction(tg, dec, ledger, exact_game, approx_game)


def build_weighted_game(
    inst: Xor3Instance, params: KmsParams, scheme: str = EXACT, budget: Budget | None = None
) -> WeightedGame:
    return reduce_instance(inst, params, budget).weighted(scheme)


# ---------------------------------------------------------------- completeness


def planted_labelling(inst: Xor3Instance, assignment: int, vertices: Sequence[KmsVertex], k: int) -> list[int]:
    """Label of each vertex given by restricting ``v -> <s, v>`` to ``L + H_U``."""
    if inst.satisfied_count(assignment) != inst.m:
        raise PreconditionError("assignment does not satisfy every equation")
    out = []
    for v in vertices:
        variables = v.variables
        vals = [parity(assignment & lift(b, variables)) for b in v.Lstar.basis]
        out.append(label_index(vals))
    return out


def iter_pairs_by_key(tg: TransitiveGame) -> Iterator[tuple[tuple, int, int]]:
    for i, j in itertools.combinations(range(len(tg.vertices)), 2):
        yield pair_key(tg.vertices[i], tg.vertices[j]), i, j
