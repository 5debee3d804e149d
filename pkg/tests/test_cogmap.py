import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mentorbot.cogmap import (
    ClauseForm,
    ClauseKind,
    CognitiveMap,
    DuplicateEdge,
    DuplicateLabel,
    EdgeKind,
    EmptyLabel,
    NodeKind,
    NotRefinable,
    ParseError,
    Polarity,
    PolarityMismatch,
    ProductAlreadySet,
    ProductMissing,
    UnknownEdge,
    UnknownNode,
    WrongNodeKind,
)

from conftest import build_random_map


def uber_fragment() -> tuple[CognitiveMap, str, str, str]:
    cmap = CognitiveMap()
    cmap.set_product("Uber")
    rider = cmap.add_customer("riders")
    problem, _ = cmap.add_problem("find a cab", ClauseKind.DIFFICULTY,
                                  ClauseForm.VERB_PHRASE, rider)
    return cmap, cmap.product, rider, problem


def test_new_map_is_empty():
    cmap = CognitiveMap()
    assert cmap.nodes == {}
    assert cmap.edges == {}
    assert cmap.product is None


def test_new_map_validation_reports_missing_pieces():
    assert CognitiveMap().validate() == ["product missing", "no customers"]


def test_empty_map_json_is_canonical():
    assert CognitiveMap().to_json() == '{"product":null,"nodes":[],"edges":[]}'
    round_tripped = CognitiveMap.from_json(CognitiveMap().to_json())
    assert round_tripped == CognitiveMap()


def test_set_product():
    cmap = CognitiveMap()
    node_id = cmap.set_product("Uber")
    node = cmap.nodes[node_id]
    assert node.kind is NodeKind.PRODUCT
    assert node.clause_text == "Uber"
    assert cmap.product == node_id


def test_set_product_rejects_empty_label():
    with pytest.raises(EmptyLabel):
        CognitiveMap().set_product("   ")


def test_set_product_twice_fails():
    cmap = CognitiveMap()
    cmap.set_product("Uber")
    with pytest.raises(ProductAlreadySet):
        cmap.set_product("X")


def test_add_customers():
    cmap = CognitiveMap()
    cmap.add_customer("riders")
    cmap.add_customer("drivers")
    assert len(cmap.nodes_of_kind(NodeKind.CUSTOMER)) == 2


@pytest.mark.parametrize("repeat", ["riders", "RIDERS", "Riders "])
def test_duplicate_customer_detection_is_case_insensitive(repeat):
    cmap = CognitiveMap()
    cmap.add_customer("riders")
    with pytest.raises(DuplicateLabel):
        cmap.add_customer(repeat)


def test_duplicate_detection_is_kind_scoped():
    cmap, _, rider, _ = uber_fragment()
    # same text as the customer, different kind: allowed
    cmap.add_problem("riders", ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE, rider)


def test_add_problem_links_to_customer():
    cmap, _, rider, problem = uber_fragment()
    edges = cmap.sorted_edges()
    assert len(edges) == 1
    assert edges[0].kind is EdgeKind.PROBLEM_LINK
    assert edges[0].source == problem
    assert edges[0].target == rider
    assert edges[0].polarity is None


def test_add_problem_checks_customer_kind():
    cmap, product, _, _ = uber_fragment()
    with pytest.raises(WrongNodeKind):
        cmap.add_problem("x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE, product)
    with pytest.raises(UnknownNode):
        cmap.add_problem("x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE, "nope")


def test_add_feature_creates_two_edges():
    cmap, product, _, problem = uber_fragment()
    feature, feasibility, value = cmap.add_feature("book a ride", ClauseForm.VERB_PHRASE,
                                                   problem, Polarity.DECREASE)
    assert cmap.edges[feasibility].kind is EdgeKind.FEASIBILITY
    assert cmap.edges[feasibility].source == product
    assert cmap.edges[feasibility].target == feature
    assert cmap.edges[value].kind is EdgeKind.VALUE
    assert cmap.edges[value].polarity is Polarity.DECREASE


def test_add_feature_requires_product():
    cmap = CognitiveMap()
    rider = cmap.add_customer("riders")
    problem, _ = cmap.add_problem("x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE, rider)
    with pytest.raises(ProductMissing):
        cmap.add_feature("f", ClauseForm.VERB_PHRASE, problem, Polarity.INCREASE)


def test_link_feature_to_problem():
    cmap, _, rider, problem = uber_fragment()
    other, _ = cmap.add_problem("high costs", ClauseKind.DIFFICULTY,
                                ClauseForm.NOUN_PHRASE, rider)
    feature, _, _ = cmap.add_feature("book a ride", ClauseForm.VERB_PHRASE,
                                     problem, Polarity.DECREASE)
    edge_id = cmap.link_feature_to_problem(feature, other, Polarity.DECREASE)
    assert cmap.edges[edge_id].source == feature
    with pytest.raises(DuplicateEdge):
        cmap.link_feature_to_problem(feature, other, Polarity.INCREASE)
    with pytest.raises(WrongNodeKind):
        cmap.link_feature_to_problem(feature, feature, Polarity.INCREASE)


def test_refine_value_edge_replaces_it_with_two():
    cmap, _, _, problem = uber_fragment()
    _, _, value = cmap.add_feature("book a ride", ClauseForm.VERB_PHRASE,
                                   problem, Polarity.DECREASE)
    nodes_before, edges_before = len(cmap.nodes), len(cmap.edges)
    node, lower, upper = cmap.refine_edge(value, "waiting time at the curb",
                                          ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE,
                                          Polarity.DECREASE, Polarity.DECREASE)
    assert value not in cmap.edges
    assert len(cmap.nodes) == nodes_before + 1
    assert len(cmap.edges) == edges_before + 1
    assert cmap.nodes[node].kind is NodeKind.PROBLEM
    assert cmap.edges[lower].kind is EdgeKind.VALUE
    assert cmap.edges[upper].kind is EdgeKind.VALUE
    assert cmap.edges[upper].polarity is Polarity.DECREASE
    assert cmap.validate() == []


def test_refine_problem_link_keeps_upper_unlabeled():
    cmap, _, rider, problem = uber_fragment()
    link = cmap.sorted_edges()[0].id
    node, lower, upper = cmap.refine_edge(link, "reach work on time", ClauseKind.DESIRE,
                                          ClauseForm.VERB_PHRASE, Polarity.INCREASE)
    assert cmap.edges[lower].kind is EdgeKind.VALUE
    assert cmap.edges[lower].source == problem
    assert cmap.edges[lower].target == node
    assert cmap.edges[upper].kind is EdgeKind.PROBLEM_LINK
    assert cmap.edges[upper].target == rider
    assert cmap.edges[upper].polarity is None


def test_refine_polarity_mismatches():
    cmap, _, _, problem = uber_fragment()
    _, feasibility, value = cmap.add_feature("book a ride", ClauseForm.VERB_PHRASE,
                                             problem, Polarity.DECREASE)
    link = next(e for e in cmap.sorted_edges() if e.kind is EdgeKind.PROBLEM_LINK)
    with pytest.raises(PolarityMismatch):
        cmap.refine_edge(value, "x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE,
                         Polarity.INCREASE)  # value edge needs an upper polarity
    with pytest.raises(PolarityMismatch):
        cmap.refine_edge(link.id, "x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE,
                         Polarity.INCREASE, Polarity.INCREASE)
    with pytest.raises(NotRefinable):
        cmap.refine_edge(feasibility, "x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE,
                         Polarity.INCREASE, Polarity.INCREASE)
    with pytest.raises(UnknownEdge):
        cmap.refine_edge("e999", "x", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE,
                         Polarity.INCREASE, Polarity.INCREASE)


def test_edge_ids_are_never_reused():
    cmap, _, _, problem = uber_fragment()
    _, _, value = cmap.add_feature("book a ride", ClauseForm.VERB_PHRASE,
                                   problem, Polarity.DECREASE)
    before = set(cmap.edges)
    _, lower, upper = cmap.refine_edge(value, "x", ClauseKind.DESIRE,
                                       ClauseForm.VERB_PHRASE, Polarity.INCREASE,
                                       Polarity.INCREASE)
    assert value not in (lower, upper)
    assert not {lower, upper} & before


def test_validate_flags_feature_without_value_edge():
    payload = {
        "product": "p1",
        "nodes": [
            {"id": "p1", "kind": "product", "clause_text": "Uber"},
            {"id": "c1", "kind": "customer", "clause_text": "riders"},
            {"id": "b1", "kind": "problem", "clause_text": "find a cab",
             "clause_kind": "difficulty", "clause_form": "vp"},
            {"id": "f1", "kind": "feature", "clause_text": "book a ride",
             "clause_form": "vp"},
        ],
        "edges": [
            {"id": "e1", "kind": "problem_link", "source": "b1", "target": "c1"},
            {"id": "e2", "kind": "feasibility", "source": "p1", "target": "f1"},
        ],
    }
    violations = CognitiveMap.from_payload(payload).validate()
    assert "feature without value edge: f1" in violations


def test_validate_flags_orphans_and_unreachable_problems():
    payload = {
        "product": "p1",
        "nodes": [
            {"id": "p1", "kind": "product", "clause_text": "Uber"},
            {"id": "c1", "kind": "customer", "clause_text": "riders"},
            {"id": "b1", "kind": "problem", "clause_text": "find a cab",
             "clause_kind": "difficulty", "clause_form": "vp"},
        ],
        "edges": [],
    }
    violations = CognitiveMap.from_payload(payload).validate()
    assert "problem without path to a customer: b1" in violations
    assert "orphan node: c1" in violations
    assert "orphan node: p1" in violations


def test_validate_detects_cycles():
    payload = {
        "product": "p1",
        "nodes": [
            {"id": "p1", "kind": "product", "clause_text": "Uber"},
            {"id": "c1", "kind": "customer", "clause_text": "riders"},
            {"id": "b1", "kind": "problem", "clause_text": "one",
             "clause_kind": "difficulty", "clause_form": "np"},
            {"id": "b2", "kind": "problem", "clause_text": "two",
             "clause_kind": "difficulty", "clause_form": "np"},
        ],
        "edges": [
            {"id": "e1", "kind": "problem_link", "source": "b1", "target": "c1"},
            {"id": "e2", "kind": "value", "source": "b1", "target": "b2", "polarity": "+"},
            {"id": "e3", "kind": "value", "source": "b2", "target": "b1", "polarity": "+"},
        ],
    }
    assert "cycle detected" in CognitiveMap.from_payload(payload).validate()


def test_uber_golden_json_and_dot(golden_dir, engine, uber_script):
    from mentorbot.dialogue import replay

    session, _ = replay(engine, uber_script)
    assert session.map.to_json() + "\n" == (golden_dir / "uber_map.json").read_text()
    assert session.map.to_dot() == (golden_dir / "uber_map.dot").read_text()


def test_json_parse_errors_carry_location():
    with pytest.raises(ParseError):
        CognitiveMap.from_json("{")
    with pytest.raises(ParseError, match=r"nodes\[0\].kind"):
        CognitiveMap.from_json('{"product":null,"nodes":[{"id":"x","kind":"nope",'
                               '"clause_text":"t"}],"edges":[]}')
    with pytest.raises(ParseError, match="polarity"):
        CognitiveMap.from_payload({
            "product": None,
            "nodes": [
                {"id": "b1", "kind": "problem", "clause_text": "x",
                 "clause_kind": "desire", "clause_form": "np"},
                {"id": "b2", "kind": "problem", "clause_text": "y",
                 "clause_kind": "desire", "clause_form": "np"},
            ],
            "edges": [{"id": "e1", "kind": "value", "source": "b1", "target": "b2"}],
        })
    with pytest.raises(ParseError, match="unknown node"):
        CognitiveMap.from_payload({
            "product": None,
            "nodes": [],
            "edges": [{"id": "e1", "kind": "problem_link", "source": "a", "target": "b"}],
        })
    with pytest.raises(ParseError, match="more than one product"):
        CognitiveMap.from_payload({
            "product": "p1",
            "nodes": [
                {"id": "p1", "kind": "product", "clause_text": "a"},
                {"id": "p2", "kind": "product", "clause_text": "b"},
            ],
            "edges": [],
        })


def test_dot_empty_map_has_no_node_statements():
    text = CognitiveMap().to_dot()
    assert text.startswith("digraph cognitive_map {")
    assert text.rstrip().endswith("}")
    assert "->" not in text
    assert "shape=" not in text


def test_dot_single_product_is_one_ellipse():
    cmap = CognitiveMap()
    cmap.set_product("Uber")
    text = cmap.to_dot()
    assert text.count("shape=ellipse") == 1
    assert "shape=circle" not in text


def test_dot_neutral_label_only_when_neutral_edge_exists():
    cmap, _, _, problem = uber_fragment()
    assert 'label="/o/"' not in cmap.to_dot()
    cmap.add_feature("book a ride", ClauseForm.VERB_PHRASE, problem, Polarity.NEUTRAL)
    assert 'label="/o/"' in cmap.to_dot()


def test_dot_escapes_quotes():
    cmap = CognitiveMap()
    cmap.set_product('the "best" app')
    assert '\\"best\\"' in cmap.to_dot()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_random_maps_round_trip_and_stay_valid(seed):
    cmap = build_random_map(random.Random(seed))
    assert cmap.validate() == []
    assert CognitiveMap.from_json(cmap.to_json()) == cmap
    for edge in cmap.edges.values():
        if edge.kind is EdgeKind.VALUE:
            assert edge.polarity is not None
        else:
            assert edge.polarity is None
    products = cmap.nodes_of_kind(NodeKind.PRODUCT)
    assert len(products) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_refine_edge_delta_property(seed):
    rng = random.Random(seed)
    cmap = build_random_map(rng, refinements=0)
    candidates = [e for e in cmap.sorted_edges() if e.kind is not EdgeKind.FEASIBILITY]
    edge = rng.choice(candidates)
    nodes_before, edges_before = len(cmap.nodes), len(cmap.edges)
    upper = Polarity.INCREASE if edge.kind is EdgeKind.VALUE else None
    cmap.refine_edge(edge.id, "underlying concept", ClauseKind.DIFFICULTY,
                     ClauseForm.NOUN_PHRASE, Polarity.DECREASE, upper)
    assert len(cmap.nodes) == nodes_before + 1
    assert len(cmap.edges) == edges_before + 1
    assert edge.id not in cmap.edges
    assert "cycle detected" not in cmap.validate()
