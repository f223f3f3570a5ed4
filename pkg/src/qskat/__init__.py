"""qskat: quantum-circuit engine and table advisor for trick-taking games."""

__version__ = "0.1.0"

from .encoding import (  # noqa: F401
    Card,
    CardLayout,
    Deal,
    DealSpec,
    GameType,
    GroupConstraint,
    Suit,
    TrickOrder,
    build_order,
    deal_count,
    decode_basis,
    encode_deal,
    enumerate_deals,
    initial_state,
    make_layout,
)
from .gates import EvolutionMode, GameCircuit, HybridRunner, RoundPlan  # noqa: F401
from .qsim import (  # noqa: F401
    SparseState,
    apply_gate,
    apply_sp,
    expectation,
    measure_histogram,
    prepare_superposition,
)
