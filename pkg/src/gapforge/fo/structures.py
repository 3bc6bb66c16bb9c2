"""Finite relational structures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from gapforge.errors import VocabularyError

Element = Hashable


@dataclass(frozen=True)
class Vocabulary:
    relations: tuple[tuple[str, int], ...]   # (name, arity), sorted by name
    constants: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.relations] + list(self.constants)
        if len(set(names)) != len(names):
            raise VocabularyError(f"duplicate symbol in {names}")
        if any(a < 0 for _, a in self.relations):
            raise VocabularyError("negative arity")

    @classmethod
    def of(cls, relations: Mapping[str, int], constants: Iterable[str] = ()) -> "Vocabulary":
        return cls(tuple(sorted(relations.items())), tuple(sorted(constants)))

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise VocabularyError(f"unknown relation symbol {name!r}")


@dataclass(frozen=True)
class Structure:
    """Universe plus relation and constant interpretations.

    The universe order is kept (it fixes the element numbering of derived
    objects) but plays no role in isomorphism.
    """

    universe: tuple[Element, ...]
    relations: Mapping[str, frozenset[tuple]]
    arities: Mapping[str, int]
    constants: Mapping[str, Element] = field(default_factory=dict)

    def __post_init__(self) -> None:
        elems = set(self.universe)
        if len(elems) != len(self.universe):
            raise VocabularyError("universe has repeated elements")
        if set(self.relations) != set(self.arities):
            raise VocabularyError("relations and arities name different symbols")
        for name, tuples in self.relations.items():
            a = self.arities[name]
            for t in tuples:
                if len(t) != a:
                    raise VocabularyError(f"{name} has arity {a}, got tuple {t}")
                if not elems.issuperset(t):
                    raise VocabularyError(f"{name} tuple {t} leaves the universe")
        for c, e in self.constants.items():
            if e not in elems:
                raise VocabularyError(f"constant {c} is not in the universe")

    @classmethod
    def build(
        cls,
        universe: Iterable[Element],
        relations: Mapping[str, Iterable[Iterable[Element]]],
        arities: Mapping[str, int] | None = None,
        constants: Mapping[str, Element] | None = None,
    ) -> "Structure":
        rels = {name: frozenset(tuple(t) for t in ts) for name, ts in relations.items()}
        ar = dict(arities or {})
        for name, ts in rels.items():
            if name not in ar:
                if not ts:
                    raise VocabularyError(f"arity of empty relation {name} must be given")
                ar[name] = len(next(iter(ts)))
        for name in ar:
            rels.setdefault(name, frozenset())
        return cls(tuple(universe), rels, ar, dict(constants or {}))

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary.of(self.arities, self.constants)

    def __len__(self) -> int:
        return len(self.universe)

    def relabel(self, mapping: Mapping[Element, Element]) -> "Structure":
        """Image under an injective renaming of elements."""
        return Structure(
            tuple(mapping[e] for e in self.universe),
            {n: frozenset(tuple(mapping[e] for e in t) for t in ts) for n, ts in self.relations.items()},
            dict(self.arities),
            {c: mapping[e] for c, e in self.constants.items()},
        )

    def to_json(self) -> dict:
        """Elements renumbered ``0..n-1`` in universe order."""
        idx = {e: i for i, e in enumerate(self.universe)}
        return {
            "size": len(self.universe),
            "arities": dict(sorted(self.arities.items())),
            "relations": {
                n: sorted([idx[e] for e in t] for t in ts) for n, ts in sorted(self.relations.items())
            },
            "constants": {c: idx[e] for c, e in sorted(self.constants.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Structure":
        return cls.build(
            range(int(data["size"])),
            {n: [tuple(t) for t in ts] for n, ts in data["relations"].items()},
            {n: int(a) for n, a in data["arities"].items()},
            {c: int(e) for c, e in data.get("constants", {}).items()},
        )

    def summary(self) -> dict:
        return {
            "size": len(self.universe),
            "relations": {n: len(ts) for n, ts in sorted(self.relations.items())},
            "constants": sorted(self.constants),
        }
