"""Exact linear algebra over GF(2) with int bitsets.

A vector of ``F_2^n`` is a Python ``int`` whose bit ``i`` is coordinate ``i``.
Subspaces are kept as reduced row-echelon bases (pivot = highest set bit,
rows sorted by decreasing pivot, pivot columns cleared everywhere else), so two
subspaces are equal exactly when their dataclasses compare equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from gapforge.budget import Budget, get_budget
from gapforge.errors import DimensionError, PreconditionError


def vec(bits: Sequence[int]) -> int:
    """Pack a bit sequence (coordinate 0 first) into an int vector."""
    v = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {i} is {b!r}, expected 0 or 1")
        if b:
            v |= 1 << i
    return v


def bits_of(v: int, n: int) -> tuple[int, ...]:
    """Unpack an int vector into ``n`` bits, coordinate 0 first."""
    _check_vector(v, n)
    return tuple((v >> i) & 1 for i in range(n))


def unit(i: int, n: int) -> int:
    if not 0 <= i < n:
        raise DimensionError(f"coordinate {i} outside F_2^{n}")
    return 1 << i


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def _check_vector(v: int, n: int) -> None:
    if v < 0 or v >> n:
        raise DimensionError(f"vector {v:#b} does not fit in F_2^{n}")


def rref(rows: Iterable[int]) -> tuple[int, ...]:
    """Canonical reduced row-echelon basis of the span of ``rows``."""
    basis: list[int] = []  # kept reduced against each other as we go
    for r in rows:
        for b in basis:
            if r ^ b < r:  # b's pivot bit is set in r
                r ^= b
        if r:
            # clear the new pivot from the existing rows
            top = r.bit_length() - 1
            basis = [b ^ r if (b >> top) & 1 else b for b in basis]
            basis.append(r)
    basis.sort(reverse=True)
    return tuple(basis)


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


@dataclass(frozen=True)
class GF2Subspace:
    """A subspace of ``F_2^ambient_dim`` in canonical echelon form."""

    ambient_dim: int
    basis: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ambient_dim < 0:
            raise DimensionError("negative ambient dimension")
        for b in self.basis:
            _check_vector(b, self.ambient_dim)
        if rref(self.basis) != self.basis:
            raise ValueError("basis is not in canonical reduced echelon form; use span()")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(b.bit_length() - 1 for b in self.basis)

    def coordinates(self, v: int) -> int | None:
        """Bitmask of basis rows summing to ``v``, or None if ``v`` is not in the space."""
        _check_vector(v, self.ambient_dim)
        mask = 0
        for i, b in enumerate(self.basis):
            if (v >> (b.bit_length() - 1)) & 1:
                v ^= b
                mask |= 1 << i
        return mask if v == 0 else None

    def __contains__(self, v: int) -> bool:
        return self.coordinates(v) is not None

    def vectors(self) -> Iterator[int]:
        """All ``2**dim`` elements, in order of their coordinate masks."""
        for mask in range(1 << self.dim):
            v = 0
            for i, b in enumerate(self.basis):
                if (mask >> i) & 1:
                    v ^= b
            yield v

    def is_subspace_of(self, other: "GF2Subspace") -> bool:
        _same_ambient(self, other)
        return all(b in other for b in self.basis)

    def indicator(self) -> tuple[int, ...]:
        """0/1 membership flag for every vector ``0 .. 2**n - 1``."""
        members = set(self.vectors())
        return tuple(int(v in members) for v in range(1 << self.ambient_dim))


def span(vectors: Iterable[int], n: int) -> GF2Subspace:
    vectors = list(vectors)
    for v in vectors:
        _check_vector(v, n)
    return GF2Subspace(n, rref(vectors))


def zero_space(n: int) -> GF2Subspace:
    return GF2Subspace(n, ())


def _same_ambient(a: GF2Subspace, b: GF2Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(*spaces: GF2Subspace) -> GF2Subspace:
    if not spaces:
        raise ValueError("subspace_sum needs at least one space")
    for s in spaces[1:]:
        _same_ambient(spaces[0], s)
    return GF2Subspace(spaces[0].ambient_dim, rref(b for s in spaces for b in s.basis))


def dim(space: GF2Subspace) -> int:
    return space.dim


def trivially_intersects(a: GF2Subspace, b: GF2Subspace) -> bool:
    """True iff ``a ∩ b = {0}``, decided by ``dim a + dim b = dim(a + b)``."""
    return a.dim + b.dim == subspace_sum(a, b).dim


def gaussian_binomial(n: int, l: int) -> int:
    """Number of ``l``-dimensional subspaces of ``F_2^n``."""
    if l < 0 or l > n:
        return 0
    num = den = 1
    for i in range(l):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def enumerate_subspaces(n: int, l: int, budget: Budget | None = None) -> Iterator[GF2Subspace]:
    """Every ``l``-dimensional subspace of ``F_2^n`` exactly once.

    Generated directly as echelon forms: a choice of pivot columns plus free
    bits in the non-pivot columns below each pivot. The order is deterministic.
    """
    budget = budget or get_budget()
    budget.require("subspace_dim", n, "subspace enumeration ambient dimension")
    if not 0 <= l <= n:
        raise DimensionError(f"cannot have a {l}-dimensional subspace of F_2^{n}")
    for pivots in itertools.combinations(range(n - 1, -1, -1), l):
        pivot_set = set(pivots)
        free = [[j for j in range(p) if j not in pivot_set] for p in pivots]
        slots = [(row, j) for row, cols in enumerate(free) for j in cols]
        for assignment in range(1 << len(slots)):
            rows = [1 << p for p in pivots]
            for s, (row, j) in enumerate(slots):
                if (assignment >> s) & 1:
                    rows[row] |= 1 << j
            yield GF2Subspace(n, tuple(rows))


# ---------------------------------------------------------------- affine systems


def solve_affine(
    equations: Sequence[tuple[int, int]], nvars: int
) -> tuple[int, tuple[int, ...]] | None:
    """Solve ``<row, s> = rhs`` for every ``(row, rhs)`` over ``F_2^nvars``.

    Returns ``(particular, nullspace_basis)`` or None when inconsistent.
    """
    pivot_rows: list[tuple[int, int, int]] = []  # (pivot, row, rhs)
    for row, rhs in equations:
        _check_vector(row, nvars)
        for p, prow, prhs in pivot_rows:
            if (row >> p) & 1:
                row ^= prow
                rhs ^= prhs
        if row == 0:
            if rhs:
                return None
            continue
        p = row.bit_length() - 1
        pivot_rows = [
            (q, qrow ^ row, qrhs ^ rhs) if (qrow >> p) & 1 else (q, qrow, qrhs)
            for q, qrow, qrhs in pivot_rows
        ]
        pivot_rows.append((p, row, rhs))
    particular = 0
    for p, _, rhs in pivot_rows:
        if rhs:
            particular |= 1 << p
    pivots = {p for p, _, _ in pivot_rows}
    null: list[int] = []
    for j in range(nvars):
        if j in pivots:
            continue
        v = 1 << j
        for p, row, _ in pivot_rows:
            if (row >> j) & 1:
                v |= 1 << p
        null.append(v)
    return particular, tuple(null)


# ---------------------------------------------------------------- functionals


@dataclass(frozen=True)
class LinearFunctional:
    """A linear map ``domain -> F_2`` given by its values on the echelon basis."""

    domain: GF2Subspace
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.domain.dim:
            raise DimensionError(
                f"{len(self.values)} values for a {self.domain.dim}-dimensional domain"
            )
        if any(b not in (0, 1) for b in self.values):
            raise ValueError("functional values must be bits")

    def __call__(self, v: int) -> int:
        mask = self.domain.coordinates(v)
        if mask is None:
            raise DimensionError(f"vector {v:#b} is outside the functional's domain")
        out = 0
        for i, b in enumerate(self.values):
            if (mask >> i) & 1:
                out ^= b
        return out

    def restrict(self, sub: GF2Subspace) -> "LinearFunctional":
        if not sub.is_subspace_of(self.domain):
            raise PreconditionError("restriction target is not inside the domain")
        return LinearFunctional(sub, tuple(self(b) for b in sub.basis))

    @classmethod
    def from_dual(cls, domain: GF2Subspace, w: int) -> "LinearFunctional":
        """The functional ``v -> <w, v>`` restricted to ``domain``."""
        _check_vector(w, domain.ambient_dim)
        return cls(domain, tuple(parity(w & b) for b in domain.basis))


def zero_functional(n: int) -> LinearFunctional:
    return LinearFunctional(zero_space(n), ())


def extend_functional(
    f: LinearFunctional,
    target: GF2Subspace,
    pins: Iterable[tuple[int, int]] = (),
) -> list[LinearFunctional]:
    """All extensions of ``f`` to ``target`` that also send each pinned vector to its bit.

    An empty list means the pins contradict ``f`` or each other.
    """
    _same_ambient(f.domain, target)
    if not f.domain.is_subspace_of(target):
        raise PreconditionError("functional domain is not contained in the target space")
    constraints: list[tuple[int, int]] = []
    for b, value in zip(f.domain.basis, f.values):
        constraints.append((target.coordinates(b), value))
    for v, bit in pins:
        if bit not in (0, 1):
            raise ValueError(f"pin value {bit!r} is not a bit")
        mask = target.coordinates(v)
        if mask is None:
            raise PreconditionError(f"pinned vector {v:#b} is not in the target space")
        constraints.append((mask, bit))
    solved = solve_affine(constraints, target.dim)
    if solved is None:
        return []
    particular, null = solved
    out = []
    for choice in range(1 << len(null)):
        s = particular
        for i, nv in enumerate(null):
            if (choice >> i) & 1:
                s ^= nv
        out.append(LinearFunctional(target, tuple((s >> i) & 1 for i in range(target.dim))))
    out.sort(key=lambda g: g.values)
    return out
