"""Isomorphism of small structures by colour refinement plus backtracking."""

from __future__ import annotations

from collections import Counter

from gapforge.budget import Budget, get_budget
from gapforge.fo.structures import Structure


def _incidence(A: Structure) -> dict:
    """element -> list of (relation, position, tuple) it occurs in."""
    inc: dict = {e: [] for e in A.universe}
    for name, tuples in A.relations.items():
        for t in tuples:
            for p, e in enumerate(t):
                inc[e].append((name, p, t))
    return inc


def refine(A: Structure, colours: dict, inc: dict | None = None) -> dict:
    """Stable colouring: an element's colour is re-split by the colours of its tuples."""
    inc = inc if inc is not None else _incidence(A)
    while True:
        sig = {
            e: (colours[e], tuple(sorted(Counter(
                (name, p, tuple(colours[x] for x in t)) for name, p, t in inc[e]
            ).items())))
            for e in A.universe
        }
        palette = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
        new = {e: palette[sig[e]] for e in A.universe}
        if len(set(new.values())) == len(set(colours.values())):
            return new
        colours = new


def _joint_refine(A: Structure, B: Structure, ca: dict, cb: dict, ia: dict, ib: dict):
    """Refine both sides with one shared palette so colours are comparable."""
    while True:
        def sig(S, inc, col):
            return {
                e: (col[e], tuple(sorted(Counter(
                    (name, p, tuple(col[x] for x in t)) for name, p, t in inc[e]
                ).items())))
                for e in S.universe
            }

        sa, sb = sig(A, ia, ca), sig(B, ib, cb)
        palette = {s: i for i, s in enumerate(sorted(set(sa.values()) | set(sb.values()), key=repr))}
        na = {e: palette[sa[e]] for e in A.universe}
        nb = {e: palette[sb[e]] for e in B.universe}
        if Counter(na.values()) != Counter(nb.values()):
            return na, nb, False
        if len(set(na.values())) == len(set(ca.values())):
            return na, nb, True
        ca, cb = na, nb


def find_isomorphism(A: Structure, B: Structure, budget: Budget | None = None) -> dict | None:
    budget = budget or get_budget()
    budget.require("iso_elements", max(len(A), len(B)), "isomorphism test size")
    if len(A) != len(B) or A.arities != B.arities or set(A.constants) != set(B.constants):
        return None
    if any(len(A.relations[n]) != len(B.relations[n]) for n in A.relations):
        return None
    ia, ib = _incidence(A), _incidence(B)
    ca = {e: 0 for e in A.universe}
    cb = {e: 0 for e in B.universe}
    for i, c in enumerate(sorted(A.constants)):
        ca[A.constants[c]] = cb_val = i + 1
        cb[B.constants[c]] = cb_val
    ca, cb, ok = _joint_refine(A, B, ca, cb, ia, ib)
    if not ok:
        return None
    rel_b = B.relations
    fresh = [max(list(ca.values()) + list(cb.values()), default=0) + 1]

    def consistent(mapping: dict, a) -> bool:
        for name, p, t in ia[a]:
            if all(x in mapping for x in t) and tuple(mapping[x] for x in t) not in rel_b[name]:
                return False
        return True

    def search(mapping: dict, ca: dict, cb: dict) -> dict | None:
        if len(mapping) == len(A):
            return dict(mapping)
        # unmapped element of A in the smallest colour class
        sizes = Counter(ca[e] for e in A.universe if e not in mapping)
        a = min((e for e in A.universe if e not in mapping), key=lambda e: (sizes[ca[e]], A.universe.index(e)))
        used = set(mapping.values())
        for b in B.universe:
            if b in used or cb[b] != ca[a]:
                continue
            mapping[a] = b
            if consistent(mapping, a):
                fresh[0] += 1
                na, nb = dict(ca), dict(cb)
                na[a] = nb[b] = fresh[0]
                na, nb, ok = _joint_refine(A, B, na, nb, ia, ib)
                if ok:
                    found = search(mapping, na, nb)
                    if found is not None:
                        return found
            del mapping[a]
        return None

    m = search({}, ca, cb)
    if m is None:
        return None
    # full check, both directions follow from equal cardinalities
    for name, tuples in A.relations.items():
        if {tuple(m[x] for x in t) for t in tuples} != B.relations[name]:
            return None
    if any(m[A.constants[c]] != B.constants[c] for c in A.constants):
        return None
    return m


def isomorphic(A: Structure, B: Structure, budget: Budget | None = None) -> bool:
    return find_isomorphism(A, B, budget) is not None
