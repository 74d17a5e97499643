from .bipartite import appendix_policy, hand_policy, make_bipartite_subgame, subgame
from .classical import classical_elusiveness, classical_game
from .core import FiniteGameSpec, GameValue, Verification, policy_from_table, solve, verify_policy

__all__ = [
    "FiniteGameSpec",
    "GameValue",
    "Verification",
    "appendix_policy",
    "classical_elusiveness",
    "classical_game",
    "hand_policy",
    "make_bipartite_subgame",
    "policy_from_table",
    "solve",
    "subgame",
    "verify_policy",
]
