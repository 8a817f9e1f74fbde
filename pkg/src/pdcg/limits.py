"""Player-count caps.

``PDCG_MAX_N`` replaces every per-operation default; the hard ceiling applies
regardless because a complete game stores 2^n values.
"""

import os

from .errors import SizeLimitExceeded

HARD_CEILING = 24

DEFAULTS = {
    "game": 24,
    "pos_extendable": 16,
    "pos_extreme_games": 5,
    "envelope": 8,
}


def max_players(operation):
    raw = os.environ.get("PDCG_MAX_N")
    cap = DEFAULTS[operation] if not raw else int(raw)
    return min(cap, HARD_CEILING)


def check_players(n, operation):
    cap = max_players(operation)
    if n > cap:
        raise SizeLimitExceeded(f"{operation}: n={n} exceeds the cap of {cap} players")
