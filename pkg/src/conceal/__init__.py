"""Secret-event concealment for partially observed discrete-event systems.

Diagnoser-based concealability, twin-plant diagnosability, and
enforceability of concealment by a defensive interface that replaces,
deletes or inserts observable events before they reach an eavesdropper.
"""

from .automata import (
    EventPartition,
    LabeledState,
    System,
    ValidationReport,
    enumerate_strings,
    load_system,
    project,
    validate,
)
from .defense import (
    DefenseSession,
    DefenseSpec,
    DefensiveAction,
    build_defensive_verifier,
    build_e_verifier,
    check_necessary,
    check_sufficient,
    defend_step,
    defensive_projection,
    e_verifier_of,
    extract_strategy,
    load_defense,
    reduce_e_verifier,
    simulate_defense,
)
from .diagnoser import (
    Classification,
    DiagnoserState,
    build_diagnoser,
    classify,
    find_secret_cycles,
    is_concealable,
    is_diagnosable,
)
from .errors import (
    ConcealError,
    HorizonTooLarge,
    InvalidSystem,
    NoFeasibleAction,
    NotEnforceable,
    SecretInitial,
    SizeLimitExceeded,
    UnknownEvent,
    UnobservableCycle,
)
from .exact import (
    build_defensive_diagnoser,
    build_e_diagnoser,
    e_diagnoser_of,
    exact_strategy,
    extract_exact_strategy,
    is_c_enforceable_exact,
    reduce_e_diagnoser,
)
from .verifier import (
    VerifierState,
    build_observer,
    build_verifier,
    check_unconstrained,
    find_safe_lasso,
    verifier_of,
)

__version__ = "0.1.0"
