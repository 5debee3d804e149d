"""Interview engine: a finite state machine over the mapping questions.

The engine asks one thing at a time, routes each answer through the NLU with
only the intents the current state admits, mutates the cognitive map on the
designated transitions, and finally walks a refinement queue offering to
insert underlying concepts on every causal edge. Help requests interrupt
without changing state; "stop" ends the interview early with the hypotheses
the partial map already supports.
"""

from __future__ import annotations

import copy
import re
import uuid
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Any, Optional

from .cogmap import (
    ClauseForm,
    ClauseKind,
    CognitiveMap,
    DuplicateEdge,
    DuplicateLabel,
    EdgeKind,
    MapError,
    MapNode,
    NodeKind,
    Polarity,
    id_sort_key,
)
from .hypotheses import Hypothesis, hypotheses_for_edges
from .nlu import ClassifierModel, Intent, classify, load_seed_corpus, train


class SessionDone(Exception):
    """The session is finished; no further turns are accepted."""


class StateKind(str, Enum):
    ASK_PRODUCT = "ask_product"
    ASK_CUSTOMER = "ask_customer"
    MORE_CUSTOMERS = "more_customers"
    ASK_PROBLEM = "ask_problem"
    MORE_PROBLEMS = "more_problems"
    ASK_FEATURE = "ask_feature"
    ASK_FEATURE_TARGET = "ask_feature_target"
    ASK_POLARITY = "ask_polarity"
    MORE_FEATURES = "more_features"
    ASK_REFINE = "ask_refine"
    ASK_REFINE_CONCEPT = "ask_refine_concept"
    ASK_REFINE_LOWER_POLARITY = "ask_refine_lower_polarity"
    ASK_REFINE_UPPER_POLARITY = "ask_refine_upper_polarity"
    SUMMARY = "summary"
    DONE = "done"


@dataclass(frozen=True)
class PendingFeature:
    """Feature answer staged while we ask for its target and polarity."""

    clause_text: str
    clause_form: ClauseForm
    target: Optional[str] = None


@dataclass(frozen=True)
class PendingRefinement:
    """Refinement staged while we collect concept and polarities for an edge."""

    edge: str
    clause_text: Optional[str] = None
    clause_kind: Optional[ClauseKind] = None
    clause_form: Optional[ClauseForm] = None
    lower: Optional[Polarity] = None


@dataclass(frozen=True)
class DialogueState:
    kind: StateKind
    customer: Optional[str] = None
    feature: Optional[PendingFeature] = None
    refinement: Optional[PendingRefinement] = None


@dataclass(frozen=True)
class EngineConfig:
    max_refinement_rounds: int = 5
    clarification_threshold: float = 0.5

    def to_payload(self) -> dict[str, Any]:
        return {
            "max_refinement_rounds": self.max_refinement_rounds,
            "clarification_threshold": self.clarification_threshold,
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "EngineConfig":
        return cls(
            max_refinement_rounds=int(payload.get("max_refinement_rounds", 5)),
            clarification_threshold=float(payload.get("clarification_threshold", 0.5)),
        )


@dataclass(frozen=True)
class TranscriptEntry:
    speaker: str  # "user" or "bot"
    text: str
    turn: int


@dataclass
class DialogueSession:
    id: str
    config: EngineConfig
    map: CognitiveMap = field(default_factory=CognitiveMap)
    state: DialogueState = field(default_factory=lambda: DialogueState(StateKind.ASK_PRODUCT))
    refinement_queue: list[str] = field(default_factory=list)
    asked_refinements: set[str] = field(default_factory=set)
    edge_depth: dict[str, int] = field(default_factory=dict)
    transcript: list[TranscriptEntry] = field(default_factory=list)
    greeting: list[str] = field(default_factory=list)
    turn: int = 0

    @property
    def done(self) -> bool:
        return self.state.kind is StateKind.DONE


@dataclass(frozen=True)
class TurnResult:
    replies: list[str]
    state: DialogueState
    map: CognitiveMap
    hypotheses: Optional[list[Hypothesis]]
    done: bool


GREETING = ("Hi, I am your product mentor. I will interview you about your "
            "idea, sketch it as a map, and turn the map into testable hypotheses.")

_MORE_PROMPTS = {
    StateKind.MORE_CUSTOMERS: "Do you want to add another customer? (yes/no)",
    StateKind.MORE_FEATURES: "Do you want to add another feature? (yes/no)",
}


def prompt_for(state: DialogueState, cmap: CognitiveMap) -> str:
    """The single question the bot asks in a state, names substituted."""
    kind = state.kind
    if kind is StateKind.DONE:
        raise SessionDone("the interview is over; there is nothing to ask")
    product = cmap.nodes[cmap.product].clause_text if cmap.product else "your product"
    if kind is StateKind.ASK_PRODUCT:
        return "What is the product name?"
    if kind is StateKind.ASK_CUSTOMER:
        if any(n.kind is NodeKind.CUSTOMER for n in cmap.nodes.values()):
            return "Who is another customer?"
        return f"What are the customers targeted by {product}?"
    if kind in _MORE_PROMPTS:
        return _MORE_PROMPTS[kind]
    if kind is StateKind.ASK_PROBLEM:
        customer = cmap.nodes[state.customer].clause_text
        return f"Why would {customer} want to use {product}?"
    if kind is StateKind.MORE_PROBLEMS:
        customer = cmap.nodes[state.customer].clause_text
        return f"Do you want to add another problem for {customer}? (yes/no)"
    if kind is StateKind.ASK_FEATURE:
        return f"Which feature do you plan for {product}?"
    if kind is StateKind.ASK_FEATURE_TARGET:
        problems = cmap.nodes_of_kind(NodeKind.PROBLEM)
        listing = "; ".join(f"{i}) {p.display_label}" for i, p in enumerate(problems, start=1))
        return f"Which of these aspects does {state.feature.clause_text} fulfill? {listing}"
    if kind is StateKind.ASK_POLARITY:
        problem = cmap.nodes[state.feature.target].display_label
        return (f"Does {state.feature.clause_text} increase, decrease, "
                f"or not affect {problem}?")
    if kind in (StateKind.ASK_REFINE, StateKind.ASK_REFINE_CONCEPT):
        edge = cmap.edges[state.refinement.edge]
        source = cmap.nodes[edge.source].display_label
        target = cmap.nodes[edge.target].display_label
        if kind is StateKind.ASK_REFINE:
            return (f"Is there any underlying concept that explains the "
                    f"relationship between {source} and {target}?")
        return f"What is the underlying concept between {source} and {target}?"
    if kind is StateKind.ASK_REFINE_LOWER_POLARITY:
        edge = cmap.edges[state.refinement.edge]
        source = cmap.nodes[edge.source].display_label
        concept = _staged_concept_label(state.refinement)
        return f"Does {source} increase, decrease, or not affect {concept}?"
    if kind is StateKind.ASK_REFINE_UPPER_POLARITY:
        edge = cmap.edges[state.refinement.edge]
        target = cmap.nodes[edge.target].display_label
        concept = _staged_concept_label(state.refinement)
        return f"Does {concept} increase, decrease, or not affect {target}?"
    # Summary is transient; it never waits for input.
    return "We are done here."


def _staged_concept_label(pending: PendingRefinement) -> str:
    staged = MapNode("staged", NodeKind.PROBLEM, pending.clause_text,
                     clause_kind=pending.clause_kind, clause_form=pending.clause_form)
    return staged.display_label


_ADMISSIBLE = {
    StateKind.ASK_PRODUCT: frozenset({Intent.PRODUCT_NAME}),
    StateKind.ASK_CUSTOMER: frozenset({Intent.CUSTOMER_DESCRIPTION}),
    StateKind.MORE_CUSTOMERS: frozenset({Intent.AFFIRM, Intent.DENY}),
    StateKind.ASK_PROBLEM: frozenset({Intent.DESIRE_DESCRIPTION, Intent.DIFFICULTY_DESCRIPTION}),
    StateKind.MORE_PROBLEMS: frozenset({Intent.AFFIRM, Intent.DENY}),
    StateKind.ASK_FEATURE: frozenset({Intent.FEATURE_DESCRIPTION}),
    StateKind.ASK_FEATURE_TARGET: frozenset({Intent.TARGET_REFERENCE}),
    StateKind.ASK_POLARITY: frozenset({Intent.POLARITY_ANSWER}),
    StateKind.MORE_FEATURES: frozenset({Intent.AFFIRM, Intent.DENY}),
    StateKind.ASK_REFINE: frozenset({Intent.AFFIRM, Intent.DENY}),
    StateKind.ASK_REFINE_CONCEPT: frozenset({Intent.DESIRE_DESCRIPTION,
                                             Intent.DIFFICULTY_DESCRIPTION}),
    StateKind.ASK_REFINE_LOWER_POLARITY: frozenset({Intent.POLARITY_ANSWER}),
    StateKind.ASK_REFINE_UPPER_POLARITY: frozenset({Intent.POLARITY_ANSWER}),
    StateKind.SUMMARY: frozenset(),
}


def admissible_intents(state: DialogueState) -> frozenset[Intent]:
    """Intents the state accepts; help and stop are admissible everywhere."""
    if state.kind is StateKind.DONE:
        return frozenset()
    return _ADMISSIBLE[state.kind] | {Intent.HELP_REQUEST, Intent.STOP}


_CLARIFICATIONS = {
    StateKind.ASK_PRODUCT: ("Give me the product name: a short label for what "
                            "you are building, for example Uber."),
    StateKind.ASK_CUSTOMER: ("Describe one customer segment that would use the "
                             "product, for example riders."),
    StateKind.MORE_CUSTOMERS: "Answer yes to add another customer segment, or no to move on.",
    StateKind.ASK_PROBLEM: ("Tell me one difficulty this customer faces or one desire "
                            "they have, for example 'it is hard to find a cab' for a "
                            "difficulty or 'to reach work on time' for a desire."),
    StateKind.MORE_PROBLEMS: ("Answer yes to add another problem or desire for this "
                              "customer, or no to continue."),
    StateKind.ASK_FEATURE: "Name one feature you plan to build, for example 'book a ride'.",
    StateKind.ASK_FEATURE_TARGET: ("Pick the aspect this feature addresses by its number "
                                   "in the list, or type the start of its label."),
    StateKind.ASK_POLARITY: ("Tell me whether the feature makes the aspect increase or "
                             "decrease, or say it does not affect it."),
    StateKind.MORE_FEATURES: "Answer yes to add another feature, or no to continue.",
    StateKind.ASK_REFINE: ("If some intermediate concept explains this relationship, "
                           "answer yes; otherwise answer no."),
    StateKind.ASK_REFINE_CONCEPT: ("Describe the underlying concept as a difficulty or "
                                   "a desire, for example 'waiting time at the curb'."),
    StateKind.ASK_REFINE_LOWER_POLARITY: ("Tell me whether the first concept makes the new "
                                          "one increase or decrease, or say it does not "
                                          "affect it."),
    StateKind.ASK_REFINE_UPPER_POLARITY: ("Tell me whether the new concept makes the other "
                                          "one increase or decrease, or say it does not "
                                          "affect it."),
    StateKind.SUMMARY: "The interview is finished.",
}


def clarification_for(state: DialogueState) -> str:
    """Authored help text shown when the user asks what is expected."""
    if state.kind is StateKind.DONE:
        raise SessionDone("the interview is over")
    return _CLARIFICATIONS[state.kind]


@lru_cache(maxsize=1)
def default_model() -> ClassifierModel:
    return train(load_seed_corpus())


class DialogueEngine:
    """Drives sessions; stateless apart from the shared read-only NLU model."""

    def __init__(self, model: Optional[ClassifierModel] = None):
        self.model = model if model is not None else default_model()

    def new_session(self, config: Optional[EngineConfig] = None,
                    session_id: Optional[str] = None) -> DialogueSession:
        session = DialogueSession(
            id=session_id or uuid.uuid4().hex[:12],
            config=config or EngineConfig(),
        )
        session.greeting = [GREETING, prompt_for(session.state, session.map)]
        for line in session.greeting:
            session.transcript.append(TranscriptEntry("bot", line, 0))
        return session

    def handle(self, session: DialogueSession, user_text: str) -> TurnResult:
        """Process one user turn and advance the state machine."""
        if session.done:
            raise SessionDone(f"session {session.id} is finished")
        session.turn += 1
        session.transcript.append(TranscriptEntry("user", user_text, session.turn))
        replies, hypotheses = self._respond(session, user_text)
        for line in replies:
            session.transcript.append(TranscriptEntry("bot", line, session.turn))
        return TurnResult(replies, session.state, copy.deepcopy(session.map),
                          hypotheses, session.done)

    # -- turn processing ----------------------------------------------

    def _respond(self, session: DialogueSession,
                 user_text: str) -> tuple[list[str], Optional[list[Hypothesis]]]:
        if not user_text.strip():
            return self._clarify(session), None
        result = classify(self.model, user_text, admissible_intents(session.state),
                          threshold=session.config.clarification_threshold)
        if result.intent is Intent.HELP_REQUEST:
            return self._clarify(session), None
        if result.intent is Intent.STOP:
            return self._finish(session, stopped=True)
        handler = getattr(self, f"_on_{session.state.kind.value}")
        try:
            return handler(session, result)
        except MapError as exc:
            return [f"I could not add that ({exc}).", prompt_for(session.state, session.map)], None

    def _clarify(self, session: DialogueSession) -> list[str]:
        return [clarification_for(session.state), prompt_for(session.state, session.map)]

    def _ask(self, session: DialogueSession, state: DialogueState,
             *acks: str) -> tuple[list[str], None]:
        session.state = state
        return [*acks, prompt_for(state, session.map)], None

    def _finish(self, session: DialogueSession,
                stopped: bool = False) -> tuple[list[str], list[Hypothesis]]:
        session.state = DialogueState(StateKind.SUMMARY)
        cmap = session.map
        hypotheses = hypotheses_for_edges(cmap)
        counts = {kind: len(cmap.nodes_of_kind(kind)) for kind in NodeKind}
        lines = []
        if stopped:
            lines.append("Stopping here as you asked.")
        lines.append(
            "That completes the interview. Your map has "
            f"{counts[NodeKind.CUSTOMER]} customer(s), {counts[NodeKind.PROBLEM]} "
            f"problem(s), and {counts[NodeKind.FEATURE]} feature(s)."
        )
        if hypotheses:
            lines.append(f"I derived {len(hypotheses)} testable hypotheses from it. "
                         "Good luck with the experiments!")
        else:
            lines.append("The map has no relationships yet, so there are no "
                         "hypotheses to test.")
        session.state = DialogueState(StateKind.DONE)
        return lines, hypotheses

    # -- per-state handlers (called with a non-help, non-stop parse) ---

    def _on_ask_product(self, session, result):
        node_id = session.map.set_product(result.clause.text)
        name = session.map.nodes[node_id].clause_text
        return self._ask(session, DialogueState(StateKind.ASK_CUSTOMER),
                         f"Great, {name} it is.")

    def _on_ask_customer(self, session, result):
        try:
            node_id = session.map.add_customer(result.clause.text)
            ack = f"Got it: {session.map.nodes[node_id].clause_text}."
        except DuplicateLabel:
            ack = f"{result.clause.text} is already on the map."
        return self._ask(session, DialogueState(StateKind.MORE_CUSTOMERS), ack)

    def _on_more_customers(self, session, result):
        if result.intent is Intent.AFFIRM:
            return self._ask(session, DialogueState(StateKind.ASK_CUSTOMER))
        first = session.map.nodes_of_kind(NodeKind.CUSTOMER)[0]
        return self._ask(session, DialogueState(StateKind.ASK_PROBLEM, customer=first.id),
                         "Now let's talk about what these customers need.")

    def _on_ask_problem(self, session, result):
        kind = (ClauseKind.DESIRE if result.intent is Intent.DESIRE_DESCRIPTION
                else ClauseKind.DIFFICULTY)
        node_id, _ = session.map.add_problem(result.clause.text, kind,
                                             result.clause.form, session.state.customer)
        label = session.map.nodes[node_id].display_label
        return self._ask(session,
                         DialogueState(StateKind.MORE_PROBLEMS, customer=session.state.customer),
                         f"Noted: {label}.")

    def _on_more_problems(self, session, result):
        if result.intent is Intent.AFFIRM:
            return self._ask(session,
                             DialogueState(StateKind.ASK_PROBLEM, customer=session.state.customer))
        customers = session.map.nodes_of_kind(NodeKind.CUSTOMER)
        ids = [c.id for c in customers]
        position = ids.index(session.state.customer)
        if position + 1 < len(ids):
            next_customer = customers[position + 1]
            return self._ask(session,
                             DialogueState(StateKind.ASK_PROBLEM, customer=next_customer.id),
                             f"On to {next_customer.clause_text}.")
        return self._ask(session, DialogueState(StateKind.ASK_FEATURE),
                         "Time to talk about the product itself.")

    def _on_ask_feature(self, session, result):
        pending = PendingFeature(result.clause.text, result.clause.form)
        return self._ask(session, DialogueState(StateKind.ASK_FEATURE_TARGET, feature=pending))

    def _on_ask_feature_target(self, session, result):
        problems = session.map.nodes_of_kind(NodeKind.PROBLEM)
        target = _resolve_target(result.clause.text, problems)
        if target is None:
            return [("I could not match that to one of the listed aspects; "
                     "give me its number or the start of its label."),
                    prompt_for(session.state, session.map)], None
        pending = replace(session.state.feature, target=target.id)
        return self._ask(session, DialogueState(StateKind.ASK_POLARITY, feature=pending))

    def _on_ask_polarity(self, session, result):
        pending = session.state.feature
        cmap = session.map
        existing = _feature_by_text(cmap, pending.clause_text)
        problem_label = cmap.nodes[pending.target].display_label
        if existing is not None:
            try:
                cmap.link_feature_to_problem(existing.id, pending.target, result.polarity)
                ack = f"Linked {existing.clause_text} to {problem_label}."
            except DuplicateEdge:
                ack = (f"{existing.clause_text} is already linked to "
                       f"{problem_label}; leaving it as is.")
        else:
            cmap.add_feature(pending.clause_text, pending.clause_form,
                             pending.target, result.polarity)
            ack = f"Added {pending.clause_text}, linked to {problem_label}."
        return self._ask(session, DialogueState(StateKind.MORE_FEATURES), ack)

    def _on_more_features(self, session, result):
        if result.intent is Intent.AFFIRM:
            return self._ask(session, DialogueState(StateKind.ASK_FEATURE))
        self._seed_refinement_queue(session)
        if session.refinement_queue:
            return self._ask(session, self._refine_state(session),
                             "Let's look for concepts hiding behind these relationships.")
        return self._finish(session)

    def _on_ask_refine(self, session, result):
        if result.intent is Intent.AFFIRM:
            pending = session.state.refinement
            return self._ask(session,
                             DialogueState(StateKind.ASK_REFINE_CONCEPT, refinement=pending))
        self._retire_edge(session, session.state.refinement.edge)
        if session.refinement_queue:
            return self._ask(session, self._refine_state(session))
        return self._finish(session)

    def _on_ask_refine_concept(self, session, result):
        kind = (ClauseKind.DESIRE if result.intent is Intent.DESIRE_DESCRIPTION
                else ClauseKind.DIFFICULTY)
        pending = replace(session.state.refinement, clause_text=result.clause.text,
                          clause_kind=kind, clause_form=result.clause.form)
        return self._ask(session,
                         DialogueState(StateKind.ASK_REFINE_LOWER_POLARITY, refinement=pending))

    def _on_ask_refine_lower_polarity(self, session, result):
        pending = replace(session.state.refinement, lower=result.polarity)
        edge = session.map.edges[pending.edge]
        if edge.kind is EdgeKind.VALUE:
            return self._ask(session,
                             DialogueState(StateKind.ASK_REFINE_UPPER_POLARITY,
                                           refinement=pending))
        return self._execute_refinement(session, pending, upper=None)

    def _on_ask_refine_upper_polarity(self, session, result):
        return self._execute_refinement(session, session.state.refinement,
                                        upper=result.polarity)

    def _on_summary(self, session, result):  # pragma: no cover - transient state
        return self._finish(session)

    # -- refinement machinery -------------------------------------------

    def _seed_refinement_queue(self, session: DialogueSession) -> None:
        if session.config.max_refinement_rounds <= 0:
            return
        for edge in session.map.sorted_edges():
            if edge.kind in (EdgeKind.VALUE, EdgeKind.PROBLEM_LINK):
                session.refinement_queue.append(edge.id)
                session.edge_depth[edge.id] = 0

    def _refine_state(self, session: DialogueSession) -> DialogueState:
        head = session.refinement_queue[0]
        return DialogueState(StateKind.ASK_REFINE, refinement=PendingRefinement(edge=head))

    def _retire_edge(self, session: DialogueSession, edge_id: str) -> None:
        session.refinement_queue.pop(0)
        session.asked_refinements.add(edge_id)

    def _execute_refinement(self, session: DialogueSession, pending: PendingRefinement,
                            upper: Optional[Polarity]):
        edge = session.map.edges[pending.edge]
        source_label = session.map.nodes[edge.source].display_label
        target_label = session.map.nodes[edge.target].display_label
        node_id, lower_id, upper_id = session.map.refine_edge(
            pending.edge, pending.clause_text, pending.clause_kind,
            pending.clause_form, pending.lower, upper)
        self._retire_edge(session, pending.edge)
        depth = session.edge_depth.get(pending.edge, 0) + 1
        for child in (lower_id, upper_id):
            session.edge_depth[child] = depth
            if (depth < session.config.max_refinement_rounds
                    and child not in session.asked_refinements
                    and child not in session.refinement_queue):
                session.refinement_queue.append(child)
        ack = (f"Inserted {session.map.nodes[node_id].display_label} between "
               f"{source_label} and {target_label}.")
        if session.refinement_queue:
            return self._ask(session, self._refine_state(session), ack)
        replies, hypotheses = self._finish(session)
        return [ack, *replies], hypotheses


def _feature_by_text(cmap: CognitiveMap, clause_text: str) -> Optional[MapNode]:
    needle = clause_text.casefold()
    for node in cmap.nodes_of_kind(NodeKind.FEATURE):
        if node.clause_text.casefold() == needle:
            return node
    return None


_INDEX_RE = re.compile(r"\d+")


def _resolve_target(text: str, problems: list[MapNode]) -> Optional[MapNode]:
    """Match a 1-based index or a unique case-insensitive label prefix."""
    match = _INDEX_RE.search(text)
    if match:
        index = int(match.group())
        if 1 <= index <= len(problems):
            return problems[index - 1]
        return None
    needle = text.strip().strip(".!?,;:\"'").lower()
    if not needle:
        return None
    candidates = [p for p in problems if p.display_label.lower().startswith(needle)]
    if len(candidates) == 1:
        return candidates[0]
    return None


def replay(engine: DialogueEngine, utterances: list[str],
           config: Optional[EngineConfig] = None,
           session_id: Optional[str] = None) -> tuple[DialogueSession, list[TurnResult]]:
    """Run a scripted list of user utterances through a fresh session."""
    session = engine.new_session(config=config, session_id=session_id)
    results = []
    for utterance in utterances:
        if session.done:
            break
        results.append(engine.handle(session, utterance))
    return session, results
