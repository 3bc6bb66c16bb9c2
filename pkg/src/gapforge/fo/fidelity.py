"""Check a catalog interpretation against its direct reduction over a corpus."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from gapforge.budget import Budget, get_budget
from gapforge.fo.catalog import CatalogEntry
from gapforge.fo.corpus import two_to_two_corpus, xor3_corpus
from gapforge.fo.interpret import apply_interpretation
from gapforge.fo.iso import isomorphic
from gapforge.xor3 import check_regular


@dataclass
class FidelityReport:
    entry: str
    params: dict
    checked: int = 0
    mismatches: list = field(default_factory=list)
    sampled: int = 0          # inputs whose congruence check was sampled, not exhaustive
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.mismatches

    def to_json(self) -> dict:
        return {
            "entry": self.entry,
            "params": self.params,
            "checked": self.checked,
            "mismatches": [repr(m) for m in self.mismatches],
            "sampled_congruence": self.sampled,
            "seconds": round(self.seconds, 3),
            "ok": self.ok,
        }


def default_corpus(entry: CatalogEntry, max_items: int = 3, q: int = 2) -> list:
    """Exhaustive inputs with at most ``max_items`` equations or edges.

    The KMS entry needs regular instances (no two equations share two
    variables), so its corpus is filtered to those.
    """
    if entry.source == "xor3":
        items = list(xor3_corpus(max_items))
        if entry.name == "kms-transitive":
            items = [i for i in items if check_regular(i, max(i.occurrences().values()))]
        return items
    return list(two_to_two_corpus(q, max_items))


def check_entry(
    entry: CatalogEntry,
    inputs: Iterable,
    params: dict | None = None,
    budget: Budget | None = None,
    stop_after: int | None = None,
) -> FidelityReport:
    """Apply the entry to every input and compare with the direct output up to isomorphism.

    ``stop_after`` ends the run once that many mismatches are collected.
    """
    budget = budget or get_budget()
    params = dict(params or {})
    theta = entry.build(**params)
    rep = FidelityReport(entry.name, params)
    start = time.perf_counter()
    for x in inputs:
        out = apply_interpretation(theta, entry.to_structure(x, **params), budget)
        rep.checked += 1
        rep.sampled += out.congruence == "sampled"
        if not isomorphic(out.structure, entry.direct(x, **params), budget):
            rep.mismatches.append(x)
            if stop_after is not None and len(rep.mismatches) >= stop_after:
                break
    rep.seconds = time.perf_counter() - start
    return rep
