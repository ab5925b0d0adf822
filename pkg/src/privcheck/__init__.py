"""Synthesis and model checking of personal privacy-disclosure behavior."""

from .checker import Verdict, check, check_suite, deadlock_freedom
from .errors import (
    BindError,
    BoundsError,
    ModelError,
    ModelFileError,
    PrivcheckError,
    QuerySyntaxError,
    RecordError,
    SynthesisError,
    TraceError,
)
from .estimator import DisclosureModelClassifier
from .io import export_dot, load_model, load_records, read_trace, save_model, write_trace
from .model import (
    Automaton,
    Channel,
    ChannelKind,
    DisclosureRecord,
    Edge,
    Emit,
    InformationType,
    Location,
    Network,
    RecipientRole,
    Receive,
    Sync,
    TrustSource,
    VariableDecl,
    apply_update,
    eval_guard,
    factor_triples,
)
from .query import bind, eval_formula, parse_query
from .semantics import (
    Configuration,
    Step,
    Trace,
    explore,
    initial_config,
    is_deadlock,
    replay,
    simulate,
    step_choices,
    successors,
)
from .synthesis import build_user_network

__version__ = "0.1.0"
