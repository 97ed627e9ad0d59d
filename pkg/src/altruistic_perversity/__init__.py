"""Exact analysis of two-strategy population games with altruistic and selfish agents."""

from .dynamics import Trajectory, integrate, step_flow
from .equilibrium import (
    EquilibriumInterval,
    EquilibriumPoint,
    EquilibriumSet,
    StrategyKind,
    all_altruistic_equilibria,
    all_selfish_equilibria,
    enumerate_equilibria,
    is_nash,
    oracle_equilibria,
)
from .errors import (
    DivisionByZeroWelfare,
    DomainError,
    InvalidGameError,
    NotPrisonersDilemma,
    PerversityError,
    SpecFileError,
    VerificationFailure,
)
from .game import (
    Curvature,
    GameInstance,
    PayoffMatrix,
    PopulationState,
    WelfareCoefficients,
    altruistic_payoff,
    classify_curvature,
    interior_equilibrium,
    selfish_payoff,
    welfare,
)
from .perversity import PDBranch, PDClassification, PerversityReport, classify_pd, pd_closed_form_pi, perversity_index
from .verification import (
    VerificationSummary,
    verify_oracle,
    verify_proof_cases,
    verify_proposition1,
    verify_theorem1,
)

__version__ = "0.1.0"
