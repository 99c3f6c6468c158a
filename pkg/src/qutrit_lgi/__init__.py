"""Leggett-Garg tests on a photonic qutrit with unambiguous and ambiguous measurements."""

from .core import (
    AmbiguousOutcome,
    EulerAngles,
    InvalidInputError,
    Outcome,
    QutritState,
    block,
    born_probs,
    build_unitary,
    elementary_rotation,
    evolve,
    project,
)
from .lgi import (
    DichotomicMap,
    EvolutionConfig,
    LgiReport,
    ProbabilityTable,
    TableKind,
    correlators,
    infer_quasiprobabilities,
    joint_ambiguous,
    joint_unambiguous,
    lgi_report,
    marginal_distribution,
    signalling_deltas,
)
from .noise import McSummary, NoiseConfig, monte_carlo
from .presets import PRESETS, get_preset
from .search import SearchSpec, SweepSpec, find_violation_window, search_max_violation, sweep

__version__ = "0.1.0"
