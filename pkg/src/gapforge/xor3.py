"""3XOR instances, exact value oracles and the instance transformations.

An instance is a list of equations ``x + y + z = b`` over ``F_2``. Equation
order is part of the identity of an instance: tuples of equations index the
vertices of the game built from it.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from gapforge.budget import Budget, get_budget
from gapforge.errors import GenerationError, PreconditionError
from gapforge.gf2 import solve_affine
from gapforge.seeding import as_rng

Equation = tuple[int, int, int, int]


@dataclass(frozen=True)
class Xor3Instance:
    num_vars: int
    equations: tuple[Equation, ...]

    def __post_init__(self) -> None:
        eqs = tuple(tuple(int(t) for t in e) for e in self.equations)
        object.__setattr__(self, "equations", eqs)
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        for i, e in enumerate(eqs):
            if len(e) != 4:
                raise ValueError(f"equation {i} must be (x, y, z, b), got {e!r}")
            x, y, z, b = e
            if b not in (0, 1):
                raise ValueError(f"equation {i}: right-hand side {b} is not a bit")
            for v in (x, y, z):
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"equation {i}: variable {v} outside 0..{self.num_vars - 1}")
            if len({x, y, z}) != 3:
                raise ValueError(f"equation {i}: variables {x}, {y}, {z} are not distinct")

    @property
    def m(self) -> int:
        return len(self.equations)

    def occurrences(self) -> Counter:
        return Counter(v for e in self.equations for v in e[:3])

    def with_rhs(self, rhs: Sequence[int]) -> "Xor3Instance":
        if len(rhs) != self.m:
            raise ValueError(f"{len(rhs)} right-hand sides for {self.m} equations")
        return Xor3Instance(
            self.num_vars, tuple((x, y, z, int(b)) for (x, y, z, _), b in zip(self.equations, rhs))
        )

    def homogeneous(self) -> "Xor3Instance":
        """The same left-hand sides with every right-hand side 0."""
        return self.with_rhs([0] * self.m)

    def satisfied_count(self, assignment: int) -> int:
        """Equations satisfied by ``assignment`` (bit ``v`` is the value of variable ``v``)."""
        return sum(
            ((assignment >> x) ^ (assignment >> y) ^ (assignment >> z)) & 1 == b
            for x, y, z, b in self.equations
        )

    # text format ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"vars {self.num_vars}"]
        lines += [f"{x} {y} {z} = {b}" for x, y, z, b in self.equations]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Xor3Instance":
        num_vars = None
        eqs: list[Equation] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "vars":
                if num_vars is not None or len(parts) != 2:
                    raise ValueError(f"line {lineno}: malformed or repeated 'vars' header")
                num_vars = int(parts[1])
                continue
            if num_vars is None:
                raise ValueError(f"line {lineno}: equation before the 'vars N' header")
            if len(parts) != 5 or parts[3] != "=":
                raise ValueError(f"line {lineno}: expected 'x y z = b', got {raw!r}")
            eqs.append((int(parts[0]), int(parts[1]), int(parts[2]), int(parts[4])))
        if num_vars is None:
            raise ValueError("missing 'vars N' header")
        return cls(num_vars, tuple(eqs))


@dataclass(frozen=True)
class GapConfig:
    """Completeness ``c`` and soundness ``s`` of a gap problem."""

    c: Fraction
    s: Fraction

    def __post_init__(self) -> None:
        c, s = Fraction(self.c), Fraction(self.s)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "s", s)
        if not 0 <= s < c <= 1:
            raise ValueError(f"need 0 <= s < c <= 1, got c={c}, s={s}")

    def classify(self, value: Fraction) -> str:
        if value >= self.c:
            return "yes"
        if value <= self.s:
            return "no"
        return "promise-gap"


# ---------------------------------------------------------------- oracles


def value_bruteforce(inst: Xor3Instance, budget: Budget | None = None) -> Fraction:
    """Largest fraction of equations satisfied by any assignment."""
    budget = budget or get_budget()
    budget.require("xor_vars", inst.num_vars, "3XOR brute force variables")
    if inst.m == 0:
        return Fraction(1)
    eqs = np.array(inst.equations, dtype=np.int64)
    best = 0
    chunk = 1 << 18
    total = 1 << inst.num_vars
    for start in range(0, total, chunk):
        a = np.arange(start, min(start + chunk, total), dtype=np.int64)
        count = np.zeros(a.shape, dtype=np.int32)
        for x, y, z, b in eqs:
            count += (((a >> x) ^ (a >> y) ^ (a >> z)) & 1) == b
        best = max(best, int(count.max()))
        if best == inst.m:
            break
    return Fraction(best, inst.m)


def _linear_system(inst: Xor3Instance) -> list[tuple[int, int]]:
    return [((1 << x) | (1 << y) | (1 << z), b) for x, y, z, b in inst.equations]


def solution_space(inst: Xor3Instance) -> tuple[int, tuple[int, ...]] | None:
    """``(particular, nullspace basis)`` of the system, or None if unsatisfiable."""
    return solve_affine(_linear_system(inst), inst.num_vars)


def is_satisfiable(inst: Xor3Instance) -> bool:
    return solution_space(inst) is not None


def satisfying_assignments(inst: Xor3Instance, limit: int | None = None) -> list[int]:
    sol = solution_space(inst)
    if sol is None:
        return []
    particular, null = sol
    out = []
    for mask in range(1 << len(null)):
        if limit is not None and len(out) >= limit:
            break
        s = particular
        for i, v in enumerate(null):
            if (mask >> i) & 1:
                s ^= v
        out.append(s)
    return out


# ---------------------------------------------------------------- transforms


def g_transform(inst: Xor3Instance) -> Xor3Instance:
    """Split every variable ``x`` into ``x_0 = 2x`` and ``x_1 = 2x + 1``.

    Each equation ``x + y + z = b`` becomes the 8 equations
    ``x_i + y_j + z_k = b + i + j + k``, in lexicographic ``(i, j, k)`` order.
    """
    eqs = []
    for x, y, z, b in inst.equations:
        for i, j, k in itertools.product((0, 1), repeat=3):
            eqs.append((2 * x + i, 2 * y + j, 2 * z + k, b ^ i ^ j ^ k))
    return Xor3Instance(2 * inst.num_vars, tuple(eqs))


def g_witness(assignment: int, num_vars: int) -> int:
    """Assignment of ``G(I)`` with ``x_0 = s(x)``, ``x_1 = 1 + s(x)``."""
    out = 0
    for v in range(num_vars):
        bit = (assignment >> v) & 1
        out |= bit << (2 * v)
        out |= (bit ^ 1) << (2 * v + 1)
    return out


def regularize(inst: Xor3Instance) -> Xor3Instance:
    """Replace equation ``t: x + y + z = b`` by three equations over fresh ``x_t, y_t, z_t``.

    The fresh variables of equation ``t`` are ``n + 3t``, ``n + 3t + 1``,
    ``n + 3t + 2``; the new equations are ``x + y_t + z_t``, ``x_t + y + z_t``
    and ``x_t + y_t + z``, all with right-hand side ``b``.
    """
    n = inst.num_vars
    eqs = []
    for t, (x, y, z, b) in enumerate(inst.equations):
        xe, ye, ze = n + 3 * t, n + 3 * t + 1, n + 3 * t + 2
        eqs += [(x, ye, ze, b), (xe, y, ze, b), (xe, ye, z, b)]
    return Xor3Instance(n + 3 * inst.m, tuple(eqs))


def check_half_regular(inst: Xor3Instance, d: int) -> bool:
    """Every variable occurs in at most ``d`` equations."""
    return all(c <= d for c in inst.occurrences().values())


def check_regular(inst: Xor3Instance, d: int) -> bool:
    """Half-regular and no two equations share more than one variable."""
    if not check_half_regular(inst, d):
        return False
    seen_pairs: set[tuple[int, int]] = set()
    for x, y, z, _ in inst.equations:
        for pair in itertools.combinations(sorted((x, y, z)), 2):
            if pair in seen_pairs:
                return False
            seen_pairs.add(pair)
    return True


# ---------------------------------------------------------------- expander generator


@dataclass(frozen=True)
class BipartiteMultigraph:
    left: int
    right: int
    edges: tuple[tuple[int, int], ...]
    # (group index, ((left, right), ...)) per round, when produced by the generator
    matchings: tuple[tuple[int, tuple[tuple[int, int], ...]], ...] = field(default=())
    groups: tuple[tuple[int, ...], ...] = field(default=())

    def left_degrees(self) -> list[int]:
        deg = [0] * self.left
        for u, _ in self.edges:
            deg[u] += 1
        return deg

    def right_degrees(self) -> list[int]:
        deg = [0] * self.right
        for _, v in self.edges:
            deg[v] += 1
        return deg

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in range(self.left)]
        for u, v in self.edges:
            nb[u].append(v)
        return nb


@dataclass(frozen=True)
class Planted:
    """Right-hand sides chosen so ``assignment`` satisfies every equation.

    With ``assignment=None`` a uniformly random assignment is drawn.
    """

    assignment: int | None = None


@dataclass(frozen=True)
class RandomRhs:
    """Right-hand sides drawn uniformly from ``{0,1}^m``."""


def generate_expander_instance(
    n: int,
    r: int,
    seed: np.random.Generator | int | None = None,
    rhs: Planted | RandomRhs = RandomRhs(),
    max_retries: int = 1000,
) -> tuple[Xor3Instance, BipartiteMultigraph]:
    """Random 3-left-regular, 3r-right-regular bipartite graph read as a 3XOR instance.

    Left nodes are equations, right nodes are variables. The ``r*n`` left
    nodes are split at random into ``r`` groups of ``n``; in ``3r`` rounds each
    group in turn (every group three times) receives a uniformly random perfect
    matching onto the right side, redrawn until it shares no edge with earlier
    rounds. Equation ``u`` lists its variables in round order.
    """
    if n < 3:
        raise PreconditionError("need at least 3 right nodes")
    if r < 1:
        raise PreconditionError("need r >= 1")
    rng = as_rng(seed)
    perm = rng.permutation(r * n)
    groups = tuple(tuple(int(u) for u in sorted(perm[g * n:(g + 1) * n])) for g in range(r))
    nb: list[list[int]] = [[] for _ in range(r * n)]
    matchings = []
    for rnd in range(3 * r):
        g = rnd % r
        members = groups[g]
        for _ in range(max_retries):
            target = rng.permutation(n)
            if all(int(t) not in nb[u] for u, t in zip(members, target)):
                break
        else:
            raise GenerationError(
                f"no edge-disjoint matching found for group {g} after {max_retries} draws"
            )
        pairs = tuple((u, int(t)) for u, t in zip(members, target))
        for u, t in pairs:
            nb[u].append(t)
        matchings.append((g, pairs))
    edges = tuple((u, v) for u in range(r * n) for v in nb[u])
    graph = BipartiteMultigraph(r * n, n, edges, tuple(matchings), groups)

    if isinstance(rhs, Planted):
        s = rhs.assignment
        if s is None:
            s = int(sum(int(bit) << i for i, bit in enumerate(rng.integers(0, 2, n))))
        bits = [((s >> a) ^ (s >> b) ^ (s >> c)) & 1 for a, b, c in nb]
    else:
        bits = [int(v) for v in rng.integers(0, 2, r * n)]
    inst = Xor3Instance(n, tuple((a, b, c, bit) for (a, b, c), bit in zip(nb, bits)))
    return inst, graph


def verify_matching_decomposition(g: BipartiteMultigraph) -> bool:
    """The stored rounds are edge-disjoint perfect matchings whose union is the edge set."""
    if not g.matchings:
        return False
    seen: set[tuple[int, int]] = set()
    for gi, pairs in g.matchings:
        lefts = [u for u, _ in pairs]
        rights = [v for _, v in pairs]
        if sorted(lefts) != sorted(g.groups[gi]) or sorted(rights) != list(range(g.right)):
            return False
        for p in pairs:
            if p in seen:
                return False
            seen.add(p)
    return Counter(seen) == Counter(g.edges)


def unique_neighbours(nb: Sequence[Sequence[int]], subset: Iterable[int]) -> set[int]:
    """Right nodes adjacent to exactly one left node of ``subset``."""
    owners: dict[int, set[int]] = {}
    for u in subset:
        for v in nb[u]:
            owners.setdefault(v, set()).add(u)
    return {v for v, us in owners.items() if len(us) == 1}


def check_unique_neighbour_expansion(
    g: BipartiteMultigraph, s_max: int, beta: Fraction | int = 1, budget: Budget | None = None
) -> bool:
    """Every left set of size at most ``s_max`` has ``>= beta*|S|`` unique neighbours."""
    budget = budget or get_budget()
    beta = Fraction(beta)
    s_max = min(s_max, g.left)
    needed = sum(comb(g.left, s) for s in range(1, s_max + 1))
    budget.require("expansion_subsets", needed, "unique-neighbour expansion subsets")
    nb = g.neighbours()
    for s in range(1, s_max + 1):
        for subset in itertools.combinations(range(g.left), s):
            if len(unique_neighbours(nb, subset)) < beta * s:
                return False
    return True


def random_instance(
    num_vars: int, m: int, seed: np.random.Generator | int | None = None, planted: bool = False
) -> Xor3Instance:
    """``m`` equations on uniformly random distinct triples."""
    if num_vars < 3:
        raise PreconditionError("need at least 3 variables")
    rng = as_rng(seed)
    s = sum(int(bit) << i for i, bit in enumerate(rng.integers(0, 2, num_vars))) if planted else 0
    eqs = []
    for _ in range(m):
        x, y, z = (int(v) for v in rng.choice(num_vars, 3, replace=False))
        b = ((s >> x) ^ (s >> y) ^ (s >> z)) & 1 if planted else int(rng.integers(0, 2))
        eqs.append((x, y, z, b))
    return Xor3Instance(num_vars, tuple(eqs))


def random_regular_instance(
    num_vars: int,
    m: int,
    seed: np.random.Generator | int | None = None,
    planted: bool = True,
    max_tries: int = 10_000,
) -> tuple[Xor3Instance, int | None]:
    """Random instance in which no two equations share two variables.

    Returns the instance and, when planted, the satisfying assignment used
    for the right-hand sides.
    """
    rng = as_rng(seed)
    s = sum(int(bit) << i for i, bit in enumerate(rng.integers(0, 2, num_vars))) if planted else None
    for _ in range(max_tries):
        eqs: list[Equation] = []
        pairs: set[tuple[int, int]] = set()
        for _ in range(m):
            for _ in range(100):
                x, y, z = sorted(int(v) for v in rng.choice(num_vars, 3, replace=False))
                new = {(x, y), (x, z), (y, z)}
                if not new & pairs:
                    break
            else:
                break
            pairs |= new
            b = ((s >> x) ^ (s >> y) ^ (s >> z)) & 1 if s is not None else int(rng.integers(0, 2))
            eqs.append((x, y, z, b))
        if len(eqs) == m:
            return Xor3Instance(num_vars, tuple(eqs)), s
    raise GenerationError(f"no {m}-equation instance on {num_vars} variables without shared pairs")
