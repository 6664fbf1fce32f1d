"""Margin-based voting methods, axiom checkers, profile synthesis and proof replay."""

from importlib import resources

from .margins import (
    MarginGraph,
    MarginMatrix,
    condorcet_loser,
    condorcet_winner,
    defensible_set,
    margin,
    margin_graph,
    margin_matrix,
    margin_separation_holds,
    uniquely_weighted,
    widest_path_strength,
)
from .methods import METHOD_IDS, borda, get_method, leximax, minimax, ranked_pairs, split_cycle
from .profiles import (
    InsufficientBallots,
    Profile,
    ProfileError,
    Ranking,
    add_ballots,
    add_profiles,
    block_of_all_linear_orders,
    enumerate_linear_orders,
    enumerate_weak_orders,
    remove_ballots,
    remove_candidate,
    reverse_ranking,
    scale_profile,
)

__version__ = "0.1.0"


def shipped_file(name: str):
    """Path-like handle to a bundled data file such as ``P1.txt`` or ``Q_M3.edges``."""
    return resources.files(__package__).joinpath("data", name)


__all__ = [
    "METHOD_IDS",
    "InsufficientBallots",
    "MarginGraph",
    "MarginMatrix",
    "Profile",
    "ProfileError",
    "Ranking",
    "add_ballots",
    "add_profiles",
    "block_of_all_linear_orders",
    "borda",
    "condorcet_loser",
    "condorcet_winner",
    "defensible_set",
    "enumerate_linear_orders",
    "enumerate_weak_orders",
    "get_method",
    "leximax",
    "margin",
    "margin_graph",
    "margin_matrix",
    "margin_separation_holds",
    "minimax",
    "ranked_pairs",
    "remove_ballots",
    "remove_candidate",
    "reverse_ranking",
    "scale_profile",
    "shipped_file",
    "split_cycle",
    "uniquely_weighted",
    "widest_path_strength",
]
