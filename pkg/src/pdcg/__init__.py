"""Exact computations on complete and incomplete cooperative games."""

from .errors import *  # noqa: F401,F403
from .game import (
    ClassReport,
    DividendVector,
    Game,
    ReducedSymmetric,
    classify,
    coalition,
    fmt,
    game_from_sizes,
    inverse_mobius,
    members,
    midpoint_check,
    mobius,
    reduce_symmetric,
    symmetric_dividends,
    unanimity,
)
from .incomplete import (
    IncompleteGame,
    IntervalGame,
    ReducedIncomplete,
    chain_convex_extension,
    interval_hull,
    is_extension,
    lattice_closure,
    reduce_partially_symmetric,
)
from .positive import (
    pos_bounded,
    pos_disjoint_case,
    pos_downclosed_case,
    pos_extendable,
    pos_extendable_bounded_size,
    pos_extreme_games,
    pos_symmetric_prefix_bounds,
    positive_envelope,
    lower_game_positivity_regression,
    sp_per_coalition_bounds,
)
from .symconvex import (
    sc_bounded,
    sc_bounds,
    sc_decompose,
    sc_extendable,
    sc_extreme_games,
    sc_membership,
    sc_violating_triple,
)

__version__ = "0.1.0"
