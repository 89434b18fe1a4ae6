"""Finite subtraction games: sequences, certificates and ruleset structure."""

from .laws import (
    TwoMoveNimPrediction,
    ceil_two_phi_power,
    fibonacci_bound,
    fibonacci_premise,
    predict_two_move_nim,
    short_period_premise,
    short_period_word,
    two_move_law,
    two_move_nim_word,
    two_move_period,
)
from .periodicity import (
    PeriodicityCertificate,
    certified_grundy,
    certified_outcomes,
    certify_periodicity,
    grundy_certificate,
    minimal_preperiod,
    outcome_certificate,
)
from .rulesets import N, P, Ruleset, RulesetError, Seed, as_ruleset, misere_seed
from .sequences import (
    DEFAULT_LIMIT,
    GrundySequence,
    OutcomeSequence,
    default_horizon,
    fnv1a64,
    grundy,
    misere_outcomes,
    outcomes,
    recheck_outcome,
)
from .structure import (
    AustinPreconditionError,
    BipartiteReport,
    ExpansionReport,
    austin_adjoin_check,
    bipartite_check,
    expansion_set,
    is_max_symmetric,
    is_symmetric,
    misere_seed_divergence,
)
