import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mentorbot.cogmap import (
    ClauseForm,
    ClauseKind,
    CognitiveMap,
    MapNode,
    NodeKind,
    Polarity,
)
from mentorbot.hypotheses import (
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

from conftest import build_random_map


def problem(kind: ClauseKind, form: ClauseForm, text: str) -> MapNode:
    return MapNode("b1", NodeKind.PROBLEM, text, clause_kind=kind, clause_form=form)


def feature(text: str) -> MapNode:
    return MapNode("f1", NodeKind.FEATURE, text, clause_form=ClauseForm.VERB_PHRASE)


PRODUCT = MapNode("p1", NodeKind.PRODUCT, "Uber")
CUSTOMER = MapNode("c1", NodeKind.CUSTOMER, "riders")

SKELETONS = [
    re.compile(r"^The team developing .+ is capable of implementing .+\.$"),
    re.compile(r"^.+ (?:increases|decreases|does not affect) .+\.$"),
    re.compile(r"^.+ has .+\.$"),
    re.compile(r"^.+ would like to .+\.$"),
    re.compile(r"^.+ would like .+\.$"),
]


def test_polarity_verb_mapping():
    assert polarity_verb(Polarity.INCREASE) == "increases"
    assert polarity_verb(Polarity.DECREASE) == "decreases"
    assert polarity_verb(Polarity.NEUTRAL) == "does not affect"


def test_polarity_verb_is_a_bijection():
    verbs = {polarity_verb(p) for p in Polarity}
    assert len(verbs) == len(list(Polarity))


def test_realize_problem_np():
    assert realize_problem_np(
        problem(ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE, "find a cab")
    ) == "difficulty to find a cab"
    assert realize_problem_np(
        problem(ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE, "high costs for a ride")
    ) == "high costs for a ride"
    assert realize_problem_np(
        problem(ClauseKind.DESIRE, ClauseForm.VERB_PHRASE, "take a ride")
    ) == "the desire to take a ride"
    assert realize_problem_np(
        problem(ClauseKind.DESIRE, ClauseForm.NOUN_PHRASE, "a cheaper commute")
    ) == "the desire for a cheaper commute"


def test_display_label_drops_the_article():
    node = problem(ClauseKind.DESIRE, ClauseForm.VERB_PHRASE, "take a ride")
    assert node.display_label == "desire to take a ride"


def test_realize_problem_np_rejects_other_kinds():
    with pytest.raises(ValueError):
        realize_problem_np(PRODUCT)


def test_render_feasibility():
    assert render_feasibility(PRODUCT, feature("book a ride")) == \
        "The team developing Uber is capable of implementing book a ride."
    assert render_feasibility(PRODUCT, feature("export data")) == \
        "The team developing Uber is capable of implementing export data."


def test_render_value_from_feature():
    target = problem(ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE, "find a cab")
    assert render_value(feature("book a ride"), Polarity.DECREASE, target) == \
        "Book a ride decreases difficulty to find a cab."
    noun_target = problem(ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE,
                          "high costs for a ride")
    assert render_value(feature("book a ride"), Polarity.DECREASE, noun_target) == \
        "Book a ride decreases high costs for a ride."


def test_render_value_from_problem_source():
    source = problem(ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE,
                     "waiting time at the curb")
    target = problem(ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE, "find a cab")
    assert render_value(source, Polarity.INCREASE, target) == \
        "Waiting time at the curb increases difficulty to find a cab."


def test_render_value_wraps_desire_targets():
    target = problem(ClauseKind.DESIRE, ClauseForm.VERB_PHRASE, "reach work on time")
    assert render_value(feature("book a ride"), Polarity.INCREASE, target) == \
        "Book a ride increases the desire to reach work on time."


def test_render_value_neutral_verb():
    target = problem(ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE, "find a cab")
    assert render_value(feature("fare splitting"), Polarity.NEUTRAL, target) == \
        "Fare splitting does not affect difficulty to find a cab."


def test_render_problem_templates():
    assert render_problem(CUSTOMER, problem(ClauseKind.DIFFICULTY,
                                            ClauseForm.VERB_PHRASE, "order a cab")) == \
        "Riders has difficulty to order a cab."
    assert render_problem(CUSTOMER, problem(ClauseKind.DIFFICULTY,
                                            ClauseForm.NOUN_PHRASE,
                                            "high costs for a ride")) == \
        "Riders has high costs for a ride."
    assert render_problem(CUSTOMER, problem(ClauseKind.DESIRE,
                                            ClauseForm.VERB_PHRASE, "take a ride")) == \
        "Riders would like to take a ride."
    assert render_problem(CUSTOMER, problem(ClauseKind.DESIRE,
                                            ClauseForm.NOUN_PHRASE, "shorter waits")) == \
        "Riders would like shorter waits."


def test_hypotheses_for_requires_a_valid_map():
    with pytest.raises(InvalidMap) as excinfo:
        hypotheses_for(CognitiveMap())
    assert "product missing" in excinfo.value.violations


def test_hypotheses_for_golden_map(golden_dir):
    cmap = CognitiveMap.from_json((golden_dir / "uber_map.json").read_text())
    hypotheses = hypotheses_for(cmap)
    assert [h.edge for h in hypotheses] == ["e1", "e2", "e3", "e4", "e5", "e6"]
    kinds = [h.kind for h in hypotheses]
    assert kinds.count(HypothesisKind.PROBLEM) == 2
    assert kinds.count(HypothesisKind.FEASIBILITY) == 2
    assert kinds.count(HypothesisKind.VALUE) == 2
    expected = (golden_dir / "uber_hypotheses.txt").read_text().splitlines()
    assert [h.statement for h in hypotheses] == expected


def test_refinement_grows_hypothesis_count_by_one(golden_dir):
    cmap = CognitiveMap.from_json((golden_dir / "uber_map.json").read_text())
    before = len(hypotheses_for(cmap))
    cmap.refine_edge("e4", "waiting time at the curb", ClauseKind.DIFFICULTY,
                     ClauseForm.NOUN_PHRASE, Polarity.DECREASE, Polarity.DECREASE)
    assert len(hypotheses_for(cmap)) == before + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_one_hypothesis_per_edge(seed):
    cmap = build_random_map(random.Random(seed))
    hypotheses = hypotheses_for(cmap)
    assert len(hypotheses) == len(cmap.edges)
    assert [h.edge for h in hypotheses] == [e.id for e in cmap.sorted_edges()]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_statements_match_the_sentence_skeletons(seed):
    cmap = build_random_map(random.Random(seed))
    for hypothesis in hypotheses_for(cmap):
        statement = hypothesis.statement
        assert statement.endswith(".")
        assert statement[0].isupper()
        assert any(skeleton.match(statement) for skeleton in SKELETONS), statement


def test_rendering_is_deterministic(golden_dir):
    cmap = CognitiveMap.from_json((golden_dir / "uber_map.json").read_text())
    first = [h.statement for h in hypotheses_for(cmap)]
    second = [h.statement for h in hypotheses_for(cmap)]
    assert first == second


def test_markdown_report_layout(golden_dir):
    cmap = CognitiveMap.from_json((golden_dir / "uber_map.json").read_text())
    report = to_markdown(hypotheses_for(cmap))
    assert report == (golden_dir / "uber_report.md").read_text()
    assert "## Feasibility hypotheses" in report
    assert "## Value hypotheses" in report
    assert "## Problem hypotheses" in report
    assert "- The team developing Uber is capable of implementing book a ride. (e3)" in report


def test_partial_rendering_skips_the_validity_gate():
    cmap = CognitiveMap()
    cmap.add_customer("riders")
    rider = cmap.nodes_of_kind(NodeKind.CUSTOMER)[0].id
    cmap.add_problem("find a cab", ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE, rider)
    assert len(hypotheses_for_edges(cmap)) == 1
    with pytest.raises(InvalidMap):
        hypotheses_for(cmap)
