"""Resource caps for the exponential-in-the-worst-case routines.

Every cap can be overridden through the ILPK_CAPS environment variable,
a comma-separated list of ``name=value`` pairs, e.g.::

    ILPK_CAPS="exact_tw=16,brute_box=1048576" ilpk verify instance.json
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

__all__ = ["Caps", "DEFAULT_CAPS", "caps_from_env"]


@dataclass(frozen=True)
class Caps:
    #: largest vertex count accepted by exact treewidth computation
    exact_tw: int = 20
    #: total number of DP table cells a single solve may allocate
    dp_cells: int = 1 << 28
    #: largest domain box the brute-force oracle will enumerate
    brute_box: int = 1 << 24
    #: largest min(rows, cols) the TU brute-force check accepts outright
    tu_dim: int = 6
    #: fallback budget of square submatrices for the TU brute-force check
    tu_budget: int = 1 << 20


def caps_from_env(env_value: str | None = None) -> Caps:
    """Parse ILPK_CAPS (or an explicit string) into a Caps object."""
    if env_value is None:
        env_value = os.environ.get("ILPK_CAPS", "")
    overrides = {}
    known = {f.name for f in fields(Caps)}
    for item in env_value.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in known:
            raise ValueError(f"bad ILPK_CAPS entry {item!r}; known caps: {sorted(known)}")
        try:
            overrides[name] = int(value)
        except ValueError:
            raise ValueError(f"bad ILPK_CAPS value in {item!r}: expected an integer") from None
    return Caps(**overrides)


DEFAULT_CAPS = caps_from_env()
