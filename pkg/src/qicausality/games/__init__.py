from .common import GameConfig, GameResult, UnsupportedParameter, run_monte_carlo
from .earac import ConcatenatedEARAC, EARAC, guess_distribution, ic1_earac_success, make_earac
from .ic2 import (
    NonlocalEvaluation,
    NonlocalStrategy,
    PairedIC1,
    RandomGuess,
    earac_nonlocal_strategy,
    evaluate_nonlocal_ic2,
    random_nonlocal_strategy,
    run_ic2,
)
from .qic import (
    ChannelStrategy,
    NaiveStrategy,
    TeleportationStrategy,
    VersionRelation,
    channel_strategy,
    naive_strategy,
    run_qic_v1,
    run_qic_v2,
    singlet_fidelities,
    teleportation_strategy,
    version_relation_check,
)

__all__ = [
    "GameConfig",
    "GameResult",
    "UnsupportedParameter",
    "run_monte_carlo",
    "EARAC",
    "ConcatenatedEARAC",
    "make_earac",
    "guess_distribution",
    "ic1_earac_success",
    "PairedIC1",
    "RandomGuess",
    "NonlocalStrategy",
    "NonlocalEvaluation",
    "evaluate_nonlocal_ic2",
    "random_nonlocal_strategy",
    "earac_nonlocal_strategy",
    "run_ic2",
    "ChannelStrategy",
    "NaiveStrategy",
    "TeleportationStrategy",
    "channel_strategy",
    "naive_strategy",
    "teleportation_strategy",
    "singlet_fidelities",
    "run_qic_v1",
    "run_qic_v2",
    "VersionRelation",
    "version_relation_check",
]
