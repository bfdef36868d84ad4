"""IPC-style scores: coverage, SAT (cost ratio) and AGL (log-time)."""

from __future__ import annotations

import math

DEFAULT_HORIZON = 900.0


def sat_score(best_known_cost: float | None, achieved_cost: float | None) -> float:
    """``C*/C``; 0 for an unsolved run (``achieved_cost`` is None)."""
    if achieved_cost is None:
        return 0.0
    if best_known_cost is None:
        raise ValueError("solved run without a best-known cost")
    if best_known_cost > achieved_cost:
        raise ValueError(f"best-known cost {best_known_cost} exceeds achieved cost {achieved_cost}")
    if achieved_cost == 0:
        return 1.0
    return best_known_cost / achieved_cost


def agl_score(runtime_s: float | None, horizon_s: float = DEFAULT_HORIZON) -> float:
    """``1 - log(T)/log(horizon)`` clamped to [0, 1]; 0 for an unsolved run."""
    if runtime_s is None:
        return 0.0
    if runtime_s < 0:
        raise ValueError("runtime must be non-negative")
    if runtime_s <= 1.0:
        return 1.0
    if runtime_s >= horizon_s:
        return 0.0
    return 1.0 - math.log(runtime_s) / math.log(horizon_s)
