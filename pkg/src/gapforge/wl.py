"""Weisfeiler-Leman refinement over relational structures of any arity.

``wl_refine(A, dim)`` runs the folklore ``dim``-dimensional algorithm on
``dim``-tuples: a tuple's new colour is its old colour together with the
multiset, over all elements ``w``, of the atomic type of ``t + (w,)`` and the
colours of the ``dim`` tuples obtained by writing ``w`` into one position.
Atomic types read every relation directly, ternary ones included.

Convention: two structures are ``C^k``-equivalent (``k`` variables, counting
quantifiers) iff the ``(k-1)``-dimensional refinement cannot tell them apart.
``wl_equivalent(A, B, k)`` takes the logic's ``k``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from gapforge.budget import Budget, get_budget
from gapforge.errors import ConsistencyError, PreconditionError, VocabularyError
from gapforge.fo.structures import Structure


@dataclass(frozen=True)
class WLPartition:
    """Stable colouring of the ``dim``-tuples of a structure (tuples hold universe elements)."""

    dim: int
    colour: dict[tuple, int]
    rounds: int

    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.colour.values()).items()))

    def classes(self) -> list[frozenset[tuple]]:
        out: dict[int, set[tuple]] = {}
        for t, c in self.colour.items():
            out.setdefault(c, set()).add(t)
        return [frozenset(v) for _, v in sorted(out.items())]


def atomic_type(A: Structure, s: Sequence) -> tuple:
    """Equality pattern, relation memberships over all position tuples, and constant positions."""
    m = len(s)
    eq = tuple(list(s).index(x) for x in s)
    rels = []
    for name in sorted(A.arities):
        R = A.relations[name]
        rels.append(tuple(
            idx for idx in itertools.product(range(m), repeat=A.arities[name])
            if tuple(s[i] for i in idx) in R
        ))
    consts = tuple(tuple(i for i, x in enumerate(s) if x == A.constants[c]) for c in sorted(A.constants))
    return eq, tuple(rels), consts


class _Canon:
    """Signature -> colour id, ids in sorted signature order.

    Keys are exact tuples, never hashes reduced to a fixed width; ``audit``
    re-checks that the printed forms of distinct signatures are distinct, so
    two classes can never be merged silently by the id assignment.
    """

    def __init__(self, signatures: Sequence[tuple]) -> None:
        distinct = sorted(set(signatures))
        self.ids = {sig: i for i, sig in enumerate(distinct)}

    def audit(self) -> None:
        seen: dict[str, tuple] = {}
        for sig in self.ids:
            key = repr(sig)
            if seen.setdefault(key, sig) != sig:
                raise ConsistencyError(f"colour collision on {key[:80]}")


def _check_vocab(structures: Sequence[Structure]) -> None:
    vocabs = {s.vocabulary for s in structures}
    if len(vocabs) > 1:
        raise VocabularyError("structures have different vocabularies")


def refine_jointly(
    structures: Sequence[Structure], dim: int, budget: Budget | None = None, max_rounds: int | None = None
) -> tuple[list[WLPartition], int]:
    """Refine several structures with one shared colour naming.

    Stops when a round does not increase the number of classes over all
    structures (the new partition always refines the old one, so equal counts
    mean equal partitions). Returns the partitions and the rounds run.
    """
    budget = budget or get_budget()
    if dim < 0:
        raise PreconditionError("dimension must be non-negative")
    _check_vocab(structures)
    budget.require("wl_tuples", sum(len(S) ** (dim + 1) for S in structures), "WL extended tuples")

    unis = [S.universe for S in structures]
    tuples = [list(itertools.product(u, repeat=dim)) for u in unis]
    # atomic types of the (dim+1)-tuples drive every round; name them jointly once
    ext = [
        {s: atomic_type(S, s) for s in itertools.product(S.universe, repeat=dim + 1)}
        for S in structures
    ]
    canon = _Canon([a for e in ext for a in e.values()])
    canon.audit()
    ext_ids = [{s: canon.ids[a] for s, a in e.items()} for e in ext]
    init = [{t: atomic_type(S, t) for t in ts} for S, ts in zip(structures, tuples)]
    canon = _Canon([a for c in init for a in c.values()])
    canon.audit()
    colours = [{t: canon.ids[a] for t, a in c.items()} for c in init]
    count = len(canon.ids)

    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        sigs = []
        for u, ts, col, ex in zip(unis, tuples, colours, ext_ids):
            sig = {}
            for t in ts:
                items = sorted(
                    (ex[t + (w,)], *(col[t[:i] + (w,) + t[i + 1:]] for i in range(dim)))
                    for w in u
                )
                sig[t] = (col[t], tuple(items))
            sigs.append(sig)
        canon = _Canon([s for sig in sigs for s in sig.values()])
        canon.audit()
        rounds += 1
        new_count = len(canon.ids)
        colours = [{t: canon.ids[s] for t, s in sig.items()} for sig in sigs]
        if new_count == count:
            break
        count = new_count
    return [WLPartition(dim, c, rounds) for c in colours], rounds


def wl_refine(A: Structure, dim: int, budget: Budget | None = None) -> WLPartition:
    """Stable ``dim``-dimensional colouring of ``A``."""
    parts, _ = refine_jointly([A], dim, budget)
    return parts[0]


def wl_equivalent(A: Structure, B: Structure, k: int, budget: Budget | None = None) -> bool:
    """``A`` and ``B`` agree on every ``C^k`` sentence (tested with ``(k-1)``-dimensional refinement)."""
    return wl_report(A, B, k, budget)["equivalent"]


def wl_report(A: Structure, B: Structure, k: int, budget: Budget | None = None) -> dict:
    if k < 1:
        raise PreconditionError("k must be at least 1")
    (pa, pb), rounds = refine_jointly([A, B], k - 1, budget)
    ha, hb = pa.histogram(), pb.histogram()
    return {
        "k": k,
        "wl_dim": k - 1,
        "equivalent": len(A) == len(B) and ha == hb,
        "rounds": rounds,
        "class_histograms": {
            "A": {str(c): n for c, n in ha.items()},
            "B": {str(c): n for c, n in hb.items()},
        },
    }


def largest_equivalent_k(
    A: Structure, B: Structure, k_max: int, budget: Budget | None = None
) -> tuple[int, dict[int, bool | None]]:
    """Largest ``k <= k_max`` with ``A`` and ``B`` still ``C^k``-equivalent.

    Equivalence is monotone (distinguished at ``k`` stays distinguished
    above), so the scan stops at the first split. ``k`` values beyond the
    budget are reported as None. Returns ``(0, ...)`` if already split at 1.
    """
    budget = budget or get_budget()
    out: dict[int, bool | None] = {}
    best = 0
    for k in range(1, k_max + 1):
        if len(A) ** k + len(B) ** k > budget.wl_tuples:
            out.update({j: None for j in range(k, k_max + 1)})
            break
        out[k] = wl_equivalent(A, B, k, budget)
        if not out[k]:
            break
        best = k
    return best, out
