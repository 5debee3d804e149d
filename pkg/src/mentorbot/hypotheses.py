"""Turns map edges into testable hypothesis statements.

Each edge kind has one sentence template; clause wording depends on whether
the underlying concept is a difficulty or a desire and on whether its clause
is a verb or a noun phrase. Rendering is deterministic: the same map always
yields the same statements, and template verbs are emitted verbatim with no
subject agreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .cogmap import (
    ClauseForm,
    ClauseKind,
    CognitiveMap,
    EdgeKind,
    MapEdge,
    MapNode,
    NodeKind,
    Polarity,
)


class InvalidMap(Exception):
    """Raised when hypotheses are requested for a structurally invalid map."""

    def __init__(self, violations: list[str]):
        super().__init__("map has violations: " + "; ".join(violations))
        self.violations = violations


class HypothesisKind(str, Enum):
    FEASIBILITY = "feasibility"
    VALUE = "value"
    PROBLEM = "problem"


_KIND_BY_EDGE = {
    EdgeKind.FEASIBILITY: HypothesisKind.FEASIBILITY,
    EdgeKind.VALUE: HypothesisKind.VALUE,
    EdgeKind.PROBLEM_LINK: HypothesisKind.PROBLEM,
}


@dataclass(frozen=True)
class Hypothesis:
    kind: HypothesisKind
    statement: str
    edge: str

    def to_payload(self) -> dict[str, str]:
        return {"kind": self.kind.value, "statement": self.statement, "edge": self.edge}


def polarity_verb(polarity: Polarity) -> str:
    """Verb phrase for a value association: increases / decreases / does not affect."""
    if polarity is Polarity.INCREASE:
        return "increases"
    if polarity is Polarity.DECREASE:
        return "decreases"
    return "does not affect"


def realize_problem_np(problem: MapNode) -> str:
    """Noun-phrase reading of a problem node, used in statement slots.

    Difficulties with a verb clause become ``difficulty to <clause>``; noun
    clauses stand on their own. Desires are wrapped as ``the desire to/for
    <clause>`` so they fit a noun slot.
    """
    if problem.kind is not NodeKind.PROBLEM:
        raise ValueError(f"{problem.id} is not a problem node")
    if problem.clause_kind is ClauseKind.DESIRE:
        return f"the {problem.display_label}"
    return problem.display_label


def render_feasibility(product: MapNode, feature: MapNode) -> str:
    return (f"The team developing {product.clause_text} is capable of "
            f"implementing {feature.clause_text}.")


def render_value(source: MapNode, polarity: Polarity, target: MapNode) -> str:
    if source.kind is NodeKind.FEATURE:
        subject = source.clause_text
    else:
        subject = realize_problem_np(source)
    return f"{_capitalize(subject)} {polarity_verb(polarity)} {realize_problem_np(target)}."


def render_problem(customer: MapNode, problem: MapNode) -> str:
    subject = _capitalize(customer.clause_text)
    if problem.clause_kind is ClauseKind.DIFFICULTY:
        if problem.clause_form is ClauseForm.VERB_PHRASE:
            return f"{subject} has difficulty to {problem.clause_text}."
        return f"{subject} has {problem.clause_text}."
    if problem.clause_form is ClauseForm.VERB_PHRASE:
        return f"{subject} would like to {problem.clause_text}."
    return f"{subject} would like {problem.clause_text}."


def hypothesis_for_edge(cmap: CognitiveMap, edge: MapEdge) -> Hypothesis:
    """Render the single hypothesis an edge stands for."""
    source = cmap.nodes[edge.source]
    target = cmap.nodes[edge.target]
    if edge.kind is EdgeKind.FEASIBILITY:
        statement = render_feasibility(source, target)
    elif edge.kind is EdgeKind.VALUE:
        statement = render_value(source, edge.polarity, target)
    else:
        statement = render_problem(target, source)
    return Hypothesis(_KIND_BY_EDGE[edge.kind], statement, edge.id)


def hypotheses_for(cmap: CognitiveMap) -> list[Hypothesis]:
    """One hypothesis per edge, in edge-id order; the map must be complete."""
    violations = cmap.validate()
    if violations:
        raise InvalidMap(violations)
    return [hypothesis_for_edge(cmap, edge) for edge in cmap.sorted_edges()]


def hypotheses_for_edges(cmap: CognitiveMap) -> list[Hypothesis]:
    """Render every existing edge without the completeness gate.

    Used for partial maps: an interview stopped early still has well-formed
    edges even when the map as a whole fails validation.
    """
    return [hypothesis_for_edge(cmap, edge) for edge in cmap.sorted_edges()]


def to_markdown(hypotheses: list[Hypothesis]) -> str:
    """Report with one section per hypothesis kind and one bullet per statement."""
    sections = [
        ("Feasibility hypotheses", HypothesisKind.FEASIBILITY),
        ("Value hypotheses", HypothesisKind.VALUE),
        ("Problem hypotheses", HypothesisKind.PROBLEM),
    ]
    lines: list[str] = []
    for title, kind in sections:
        lines.append(f"## {title}")
        lines.extend(f"- {h.statement} ({h.edge})" for h in hypotheses if h.kind is kind)
        lines.append("")
    return "\n".join(lines)


def _capitalize(text: str) -> str:
    return text[0].upper() + text[1:] if text else text
