"""Conversational mentor that interviews startup founders, builds a layered
cognitive map of their product theory, and derives testable hypotheses."""

from .cogmap import (
    ClauseForm,
    ClauseKind,
    CognitiveMap,
    EdgeKind,
    MapEdge,
    MapError,
    MapNode,
    NodeKind,
    Polarity,
)
from .dialogue import (
    DialogueEngine,
    DialogueSession,
    DialogueState,
    EngineConfig,
    SessionDone,
    StateKind,
    TurnResult,
    admissible_intents,
    clarification_for,
    prompt_for,
    replay,
)
from .hypotheses import (
    Hypothesis,
    HypothesisKind,
    InvalidMap,
    hypotheses_for,
    hypotheses_for_edges,
    polarity_verb,
    realize_problem_np,
    render_feasibility,
    render_problem,
    render_value,
    to_markdown,
)

__version__ = "0.1.0"

__all__ = [
    "ClauseForm",
    "ClauseKind",
    "CognitiveMap",
    "DialogueEngine",
    "DialogueSession",
    "DialogueState",
    "EdgeKind",
    "EngineConfig",
    "Hypothesis",
    "HypothesisKind",
    "InvalidMap",
    "MapEdge",
    "MapError",
    "MapNode",
    "NodeKind",
    "Polarity",
    "SessionDone",
    "StateKind",
    "TurnResult",
    "admissible_intents",
    "clarification_for",
    "hypotheses_for",
    "hypotheses_for_edges",
    "polarity_verb",
    "prompt_for",
    "realize_problem_np",
    "render_feasibility",
    "render_problem",
    "render_value",
    "replay",
    "to_markdown",
]
