"""Exploration caps and their environment-variable override.

All search loops in the package are bounded: the tool only supports
bounded nets and detects violations by running into a cap rather than by
coverability analysis.  Defaults can be overridden globally through the
``BASISNET_CAPS`` environment variable, e.g.::

    BASISNET_CAPS="rg_states=50000,brg_states=200000"

or per call by passing a :class:`Caps` instance.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "BASISNET_CAPS"


@dataclass(frozen=True)
class Caps:
    rg_states: int = 200_000
    brg_states: int = 10_000_000
    saturation: int = 1_000_000
    explanations: int = 1_000_000
    implicit_reach: int = 1_000_000

    @classmethod
    def from_env(cls, env: str | None = None) -> "Caps":
        """Build caps from ``BASISNET_CAPS`` (or the given string)."""
        text = os.environ.get(ENV_VAR, "") if env is None else env
        caps = cls()
        if not text.strip():
            return caps
        known = {f.name for f in fields(cls)}
        overrides = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise ValueError(f"unknown cap {key!r} in {ENV_VAR}")
            overrides[key] = int(value)
            if overrides[key] <= 0:
                raise ValueError(f"cap {key} must be positive")
        return replace(caps, **overrides)


def resolve(caps: Caps | None) -> Caps:
    """Return the caps to use: the given ones, else env-configured defaults."""
    return caps if caps is not None else Caps.from_env()
