"""Runtime caps.

All searches in this package are bounded; the bounds below are generous
for desk-scale graphs and can be raised through the environment variable
``PLUMBHF_MAX_STATES``, which overrides every state-count cap at once.
"""

from __future__ import annotations

import os

DEFAULT_MAX_STATES = 2_000_000
DEFAULT_WALK_CAP = 1_000_000
DEFAULT_EXPANSION = 2

ENV_MAX_STATES = "PLUMBHF_MAX_STATES"


def max_states() -> int:
    """State-count cap, honoring the PLUMBHF_MAX_STATES override."""
    raw = os.environ.get(ENV_MAX_STATES)
    if raw is None:
        return DEFAULT_MAX_STATES
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{ENV_MAX_STATES} must be positive, got {raw!r}")
    return value


def walk_cap() -> int:
    """Per-walk visited-vector cap (same override)."""
    raw = os.environ.get(ENV_MAX_STATES)
    if raw is None:
        return DEFAULT_WALK_CAP
    return int(raw)
