"""Enumeration caps for the exponential oracles.

Defaults can be overridden with ``GAPFORGE_BUDGET``, a comma-separated list of
``name=value`` pairs, e.g. ``GAPFORGE_BUDGET=colourings=50000000,xor_vars=24``.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

from gapforge.errors import CapacityError

ENV_VAR = "GAPFORGE_BUDGET"


@dataclass(frozen=True)
class Budget:
    subspace_dim: int = 16          # ambient dimension for subspace enumeration
    xor_vars: int = 22              # variables for 3XOR brute force
    colourings: int = 20_000_000    # colourings for game values
    irreg_colourings: int = 2_000_000
    is_vertices: int = 30           # independent set branch and bound
    chroma_vertices: int = 25       # nominal size for exact colouring
    chroma_nodes: int = 5_000_000   # search nodes for exact colouring
    expansion_subsets: int = 2_000_000
    fo_assignments: int = 5_000_000  # tuples examined when counting / applying
    congruence_checks: int = 300_000
    iso_elements: int = 64
    wl_tuples: int = 200_000
    kms_vertices: int = 4_000
    cloud_vertices: int = 30_000
    multigraph_edges: int = 200_000

    def require(self, name: str, needed: int, what: str = "") -> None:
        """Raise :class:`CapacityError` if ``needed`` exceeds cap ``name``."""
        cap = getattr(self, name)
        if needed > cap:
            label = what or name
            raise CapacityError(f"{label}: {needed} exceeds budget {name}={cap}")

    def replace(self, **changes: int) -> "Budget":
        return dataclasses.replace(self, **changes)


def parse_overrides(text: str) -> dict[str, int]:
    known = {f.name for f in dataclasses.fields(Budget)}
    out: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad {ENV_VAR} entry {part!r}; expected name=value")
        name, value = (s.strip() for s in part.split("=", 1))
        if name not in known:
            raise ValueError(f"unknown budget {name!r}; known: {sorted(known)}")
        out[name] = int(float(value))
    return out


def get_budget() -> Budget:
    """Default budget with ``GAPFORGE_BUDGET`` overrides applied."""
    text = os.environ.get(ENV_VAR, "")
    return Budget(**parse_overrides(text)) if text else Budget()
