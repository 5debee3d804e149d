"""Layered cognitive map of a product idea.

The map links one product (bottom layer) to its planned features, the
problems and desires those features address, and the customer segments that
feel them (top layer). Every edge stands for a hypothesis to be tested later;
value edges additionally carry a polarity label ("+", "-" or "/o/").

All edges point "upward" through the layers: product -> feature,
feature/problem -> problem, problem -> customer.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class MapError(Exception):
    """Base class for cognitive-map errors."""


class EmptyLabel(MapError):
    pass


class ProductAlreadySet(MapError):
    pass


class ProductMissing(MapError):
    pass


class DuplicateLabel(MapError):
    pass


class UnknownNode(MapError):
    pass


class UnknownEdge(MapError):
    pass


class WrongNodeKind(MapError):
    pass


class DuplicateEdge(MapError):
    pass


class NotRefinable(MapError):
    pass


class PolarityMismatch(MapError):
    pass


class ParseError(MapError):
    """Raised when map JSON cannot be decoded; the message carries a location."""


class Polarity(Enum):
    """Direction of a value association, displayed as "+", "-" or "/o/"."""

    INCREASE = "+"
    DECREASE = "-"
    NEUTRAL = "/o/"

    @property
    def display(self) -> str:
        return self.value

    @classmethod
    def from_display(cls, text: str) -> "Polarity":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"not a polarity label: {text!r}")


class NodeKind(str, Enum):
    PRODUCT = "product"
    CUSTOMER = "customer"
    PROBLEM = "problem"
    FEATURE = "feature"


class ClauseKind(str, Enum):
    DESIRE = "desire"
    DIFFICULTY = "difficulty"


class ClauseForm(str, Enum):
    VERB_PHRASE = "vp"
    NOUN_PHRASE = "np"


class EdgeKind(str, Enum):
    FEASIBILITY = "feasibility"
    VALUE = "value"
    PROBLEM_LINK = "problem_link"


_ID_RE = re.compile(r"([a-z]+)([0-9]+)")


def id_sort_key(identifier: str) -> tuple[str, int]:
    """Order ids like b2 < b10 within a prefix; foreign ids sort by text."""
    m = _ID_RE.fullmatch(identifier)
    if m:
        return (m.group(1), int(m.group(2)))
    return (identifier, -1)


@dataclass(frozen=True)
class MapNode:
    """One concept on the map.

    ``clause_kind`` is set only for problems; ``clause_form`` only for
    problems and features.
    """

    id: str
    kind: NodeKind
    clause_text: str
    clause_kind: Optional[ClauseKind] = None
    clause_form: Optional[ClauseForm] = None

    @property
    def display_label(self) -> str:
        """Human label used in prompts and drawings.

        Problems are rendered with their kind spelled out (``difficulty to
        find a cab``, ``desire for lower fares``); other nodes show their
        clause text verbatim.
        """
        if self.kind is not NodeKind.PROBLEM:
            return self.clause_text
        if self.clause_kind is ClauseKind.DIFFICULTY:
            if self.clause_form is ClauseForm.VERB_PHRASE:
                return f"difficulty to {self.clause_text}"
            return self.clause_text
        if self.clause_form is ClauseForm.VERB_PHRASE:
            return f"desire to {self.clause_text}"
        return f"desire for {self.clause_text}"


@dataclass(frozen=True)
class MapEdge:
    """A typed arrow between two nodes; value edges carry a polarity."""

    id: str
    kind: EdgeKind
    source: str
    target: str
    polarity: Optional[Polarity] = None


_EDGE_ENDPOINT_KINDS = {
    EdgeKind.FEASIBILITY: (NodeKind.PRODUCT, NodeKind.FEATURE),
    EdgeKind.PROBLEM_LINK: (NodeKind.PROBLEM, NodeKind.CUSTOMER),
}

_NODE_ID_PREFIX = {
    NodeKind.PRODUCT: "p",
    NodeKind.CUSTOMER: "c",
    NodeKind.PROBLEM: "b",
    NodeKind.FEATURE: "f",
}


@dataclass
class CognitiveMap:
    """Mutable layered graph built during an interview session.

    Ids are deterministic per-kind counters (``p1``, ``c1``, ``b3``, ``f2``
    for nodes, ``e5`` for edges) and are never reused after removal.
    """

    nodes: dict[str, MapNode] = field(default_factory=dict)
    edges: dict[str, MapEdge] = field(default_factory=dict)
    product: Optional[str] = None
    _counters: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    # -- construction -------------------------------------------------

    def _next_id(self, prefix: str) -> str:
        count = self._counters.get(prefix, 0) + 1
        self._counters[prefix] = count
        return f"{prefix}{count}"

    def _require_label(self, clause_text: str) -> str:
        cleaned = clause_text.strip()
        if not cleaned:
            raise EmptyLabel("clause text must not be empty")
        return cleaned

    def _require_node(self, node_id: str, kind: NodeKind) -> MapNode:
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownNode(f"no node with id {node_id!r}")
        if node.kind is not kind:
            raise WrongNodeKind(f"{node_id} is a {node.kind.value}, expected {kind.value}")
        return node

    def _add_node(self, node: MapNode) -> MapNode:
        self.nodes[node.id] = node
        return node

    def _add_edge(self, kind: EdgeKind, source: str, target: str,
                  polarity: Optional[Polarity] = None) -> MapEdge:
        edge = MapEdge(self._next_id("e"), kind, source, target, polarity)
        self.edges[edge.id] = edge
        return edge

    def _edge_between(self, kind: EdgeKind, source: str, target: str) -> Optional[MapEdge]:
        for edge in self.edges.values():
            if edge.kind is kind and edge.source == source and edge.target == target:
                return edge
        return None

    def set_product(self, clause_text: str) -> str:
        """Create the single product node at the bottom of the map."""
        cleaned = self._require_label(clause_text)
        if self.product is not None:
            raise ProductAlreadySet(f"product already set to {self.product}")
        node = self._add_node(MapNode(self._next_id("p"), NodeKind.PRODUCT, cleaned))
        self.product = node.id
        return node.id

    def add_customer(self, clause_text: str) -> str:
        """Add a customer segment circle to the top layer."""
        cleaned = self._require_label(clause_text)
        for node in self.nodes.values():
            if node.kind is NodeKind.CUSTOMER and node.clause_text.casefold() == cleaned.casefold():
                raise DuplicateLabel(f"customer {cleaned!r} already on the map")
        node = self._add_node(MapNode(self._next_id("c"), NodeKind.CUSTOMER, cleaned))
        return node.id

    def add_problem(self, clause_text: str, clause_kind: ClauseKind,
                    clause_form: ClauseForm, customer: str) -> tuple[str, str]:
        """Add a problem box below ``customer`` and link it upward."""
        cleaned = self._require_label(clause_text)
        self._require_node(customer, NodeKind.CUSTOMER)
        node = self._add_node(MapNode(self._next_id("b"), NodeKind.PROBLEM, cleaned,
                                      clause_kind=clause_kind, clause_form=clause_form))
        edge = self._add_edge(EdgeKind.PROBLEM_LINK, node.id, customer)
        return node.id, edge.id

    def add_feature(self, clause_text: str, clause_form: ClauseForm,
                    target_problem: str, polarity: Polarity) -> tuple[str, str, str]:
        """Add a dashed feature box wired to the product and to one problem."""
        if self.product is None:
            raise ProductMissing("set the product before adding features")
        cleaned = self._require_label(clause_text)
        self._require_node(target_problem, NodeKind.PROBLEM)
        node = self._add_node(MapNode(self._next_id("f"), NodeKind.FEATURE, cleaned,
                                      clause_form=clause_form))
        feasibility = self._add_edge(EdgeKind.FEASIBILITY, self.product, node.id)
        value = self._add_edge(EdgeKind.VALUE, node.id, target_problem, polarity)
        return node.id, feasibility.id, value.id

    def link_feature_to_problem(self, feature: str, problem: str,
                                polarity: Polarity) -> str:
        """Attach an existing feature to one more problem it addresses."""
        self._require_node(feature, NodeKind.FEATURE)
        self._require_node(problem, NodeKind.PROBLEM)
        if self._edge_between(EdgeKind.VALUE, feature, problem) is not None:
            raise DuplicateEdge(f"{feature} is already linked to {problem}")
        return self._add_edge(EdgeKind.VALUE, feature, problem, polarity).id

    def refine_edge(self, edge_id: str, clause_text: str, clause_kind: ClauseKind,
                    clause_form: ClauseForm, lower_polarity: Polarity,
                    upper_polarity: Optional[Polarity] = None) -> tuple[str, str, str]:
        """Insert an intermediate concept on an edge, replacing it by two.

        The refined edge is removed; a new problem node takes its place with a
        lower value edge from the original source and an upper edge to the
        original target (a value edge when the original carried a polarity, a
        plain problem link otherwise).
        """
        edge = self.edges.get(edge_id)
        if edge is None:
            raise UnknownEdge(f"no edge with id {edge_id!r}")
        if edge.kind is EdgeKind.FEASIBILITY:
            raise NotRefinable("feasibility edges have no underlying concept to insert")
        if lower_polarity is None:
            raise PolarityMismatch("a lower polarity is always required")
        if edge.kind is EdgeKind.VALUE and upper_polarity is None:
            raise PolarityMismatch("refining a value edge requires an upper polarity")
        if edge.kind is EdgeKind.PROBLEM_LINK and upper_polarity is not None:
            raise PolarityMismatch("a refined problem link keeps no polarity above the new concept")
        cleaned = self._require_label(clause_text)

        node = self._add_node(MapNode(self._next_id("b"), NodeKind.PROBLEM, cleaned,
                                      clause_kind=clause_kind, clause_form=clause_form))
        del self.edges[edge.id]
        lower = self._add_edge(EdgeKind.VALUE, edge.source, node.id, lower_polarity)
        if edge.kind is EdgeKind.VALUE:
            upper = self._add_edge(EdgeKind.VALUE, node.id, edge.target, upper_polarity)
        else:
            upper = self._add_edge(EdgeKind.PROBLEM_LINK, node.id, edge.target)
        return node.id, lower.id, upper.id

    # -- queries ------------------------------------------------------

    def sorted_nodes(self) -> list[MapNode]:
        return sorted(self.nodes.values(), key=lambda n: id_sort_key(n.id))

    def sorted_edges(self) -> list[MapEdge]:
        return sorted(self.edges.values(), key=lambda e: id_sort_key(e.id))

    def nodes_of_kind(self, kind: NodeKind) -> list[MapNode]:
        return [n for n in self.sorted_nodes() if n.kind is kind]

    def validate(self) -> list[str]:
        """Report every structural violation; an empty list means complete."""
        violations: list[str] = []
        if self.product is None:
            violations.append("product missing")
        if not any(n.kind is NodeKind.CUSTOMER for n in self.nodes.values()):
            violations.append("no customers")

        outgoing: dict[str, list[str]] = {nid: [] for nid in self.nodes}
        incoming_feasibility: set[str] = set()
        value_sources: set[str] = set()
        touched: set[str] = set()
        for edge in self.edges.values():
            outgoing[edge.source].append(edge.target)
            touched.update((edge.source, edge.target))
            if edge.kind is EdgeKind.FEASIBILITY:
                incoming_feasibility.add(edge.target)
            if edge.kind is EdgeKind.VALUE:
                value_sources.add(edge.source)

        for node in self.sorted_nodes():
            if node.kind is NodeKind.FEATURE:
                if node.id not in incoming_feasibility:
                    violations.append(f"feature without feasibility edge: {node.id}")
                if node.id not in value_sources:
                    violations.append(f"feature without value edge: {node.id}")
        for node in self.sorted_nodes():
            if node.kind is NodeKind.PROBLEM and not self._reaches_customer(node.id, outgoing):
                violations.append(f"problem without path to a customer: {node.id}")
        for node in self.sorted_nodes():
            if node.id not in touched:
                violations.append(f"orphan node: {node.id}")
        if self._has_cycle(outgoing):
            violations.append("cycle detected")
        return violations

    def _reaches_customer(self, start: str, outgoing: dict[str, list[str]]) -> bool:
        stack = [start]
        seen = set()
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            node = self.nodes.get(current)
            if node is not None and node.kind is NodeKind.CUSTOMER:
                return True
            stack.extend(outgoing.get(current, ()))
        return False

    def _has_cycle(self, outgoing: dict[str, list[str]]) -> bool:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = dict.fromkeys(self.nodes, WHITE)
        for root in self.nodes:
            if color[root] != WHITE:
                continue
            stack: list[tuple[str, int]] = [(root, 0)]
            color[root] = GRAY
            while stack:
                node, index = stack[-1]
                successors = outgoing.get(node, [])
                if index < len(successors):
                    stack[-1] = (node, index + 1)
                    successor = successors[index]
                    if color.get(successor, WHITE) == GRAY:
                        return True
                    if color.get(successor, WHITE) == WHITE:
                        color[successor] = GRAY
                        stack.append((successor, 0))
                else:
                    color[node] = BLACK
                    stack.pop()
        return False

    # -- serialization ------------------------------------------------

    def to_payload(self) -> dict[str, Any]:
        """Plain-dict form with canonical key order and id-sorted arrays."""
        nodes = []
        for node in self.sorted_nodes():
            item: dict[str, Any] = {
                "id": node.id,
                "kind": node.kind.value,
                "clause_text": node.clause_text,
            }
            if node.clause_kind is not None:
                item["clause_kind"] = node.clause_kind.value
            if node.clause_form is not None:
                item["clause_form"] = node.clause_form.value
            nodes.append(item)
        edges = []
        for edge in self.sorted_edges():
            item = {
                "id": edge.id,
                "kind": edge.kind.value,
                "source": edge.source,
                "target": edge.target,
            }
            if edge.polarity is not None:
                item["polarity"] = edge.polarity.display
            edges.append(item)
        return {"product": self.product, "nodes": nodes, "edges": edges}

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), separators=(",", ":"))

    @classmethod
    def from_payload(cls, payload: Any) -> "CognitiveMap":
        if not isinstance(payload, dict):
            raise ParseError("top level: expected an object")
        for key in ("product", "nodes", "edges"):
            if key not in payload:
                raise ParseError(f"top level: missing {key!r}")
        cmap = cls()
        cmap.nodes = _parse_nodes(payload["nodes"])
        cmap.edges = _parse_edges(payload["edges"], cmap.nodes)
        cmap.product = _parse_product(payload["product"], cmap.nodes)
        counters: dict[str, int] = {}
        for identifier in list(cmap.nodes) + list(cmap.edges):
            m = _ID_RE.fullmatch(identifier)
            if m:
                prefix, number = m.group(1), int(m.group(2))
                counters[prefix] = max(counters.get(prefix, 0), number)
        cmap._counters = counters
        return cmap

    @classmethod
    def from_json(cls, text: str) -> "CognitiveMap":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_payload(payload)

    def to_dot(self) -> str:
        """Render the map as Graphviz DOT text.

        Shapes follow the drawing convention: product ellipse, customer
        circles, solid problem boxes, dashed feature boxes. Value edges are
        labeled with their polarity. Customers, features and the product are
        pinned to shared ranks; problems stack freely between them.
        """
        lines = ["digraph cognitive_map {", "  rankdir=BT;", '  node [fontname="Helvetica"];']
        shapes = {
            NodeKind.PRODUCT: "ellipse",
            NodeKind.CUSTOMER: "circle",
            NodeKind.PROBLEM: "box",
            NodeKind.FEATURE: "box",
        }
        for node in self.sorted_nodes():
            attrs = [f'label="{_dot_escape(node.display_label)}"', f"shape={shapes[node.kind]}"]
            if node.kind is NodeKind.FEATURE:
                attrs.append("style=dashed")
            lines.append(f'  "{node.id}" [{", ".join(attrs)}];')
        for edge in self.sorted_edges():
            suffix = ""
            if edge.polarity is not None:
                suffix = f' [label="{_dot_escape(edge.polarity.display)}"]'
            lines.append(f'  "{edge.source}" -> "{edge.target}"{suffix};')
        for kind in (NodeKind.CUSTOMER, NodeKind.FEATURE, NodeKind.PRODUCT):
            members = self.nodes_of_kind(kind)
            if members:
                group = " ".join(f'"{n.id}";' for n in members)
                lines.append(f"  {{ rank=same; {group} }}")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _parse_nodes(raw: Any) -> dict[str, MapNode]:
    if not isinstance(raw, list):
        raise ParseError("nodes: expected an array")
    nodes: dict[str, MapNode] = {}
    product_seen = False
    for i, item in enumerate(raw):
        where = f"nodes[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where}: expected an object")
        node_id = _parse_str(item, "id", where)
        if node_id in nodes:
            raise ParseError(f"{where}.id: duplicate id {node_id!r}")
        kind = _parse_enum(NodeKind, item, "kind", where)
        clause_text = _parse_str(item, "clause_text", where)
        clause_kind = clause_form = None
        if kind is NodeKind.PROBLEM:
            clause_kind = _parse_enum(ClauseKind, item, "clause_kind", where)
        elif "clause_kind" in item:
            raise ParseError(f"{where}.clause_kind: only problems carry a clause kind")
        if kind in (NodeKind.PROBLEM, NodeKind.FEATURE):
            clause_form = _parse_enum(ClauseForm, item, "clause_form", where)
        elif "clause_form" in item:
            raise ParseError(f"{where}.clause_form: only problems and features carry a clause form")
        if kind is NodeKind.PRODUCT:
            if product_seen:
                raise ParseError(f"{where}: more than one product node")
            product_seen = True
        nodes[node_id] = MapNode(node_id, kind, clause_text, clause_kind, clause_form)
    return nodes


def _parse_edges(raw: Any, nodes: dict[str, MapNode]) -> dict[str, MapEdge]:
    if not isinstance(raw, list):
        raise ParseError("edges: expected an array")
    edges: dict[str, MapEdge] = {}
    seen_triples: set[tuple[EdgeKind, str, str]] = set()
    for i, item in enumerate(raw):
        where = f"edges[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where}: expected an object")
        edge_id = _parse_str(item, "id", where)
        if edge_id in edges:
            raise ParseError(f"{where}.id: duplicate id {edge_id!r}")
        kind = _parse_enum(EdgeKind, item, "kind", where)
        source = _parse_str(item, "source", where)
        target = _parse_str(item, "target", where)
        for endpoint, name in ((source, "source"), (target, "target")):
            if endpoint not in nodes:
                raise ParseError(f"{where}.{name}: unknown node {endpoint!r}")
        polarity = None
        if kind is EdgeKind.VALUE:
            raw_polarity = item.get("polarity")
            if not isinstance(raw_polarity, str):
                raise ParseError(f"{where}.polarity: value edges require a polarity")
            try:
                polarity = Polarity.from_display(raw_polarity)
            except ValueError as exc:
                raise ParseError(f"{where}.polarity: {exc}") from exc
        elif "polarity" in item:
            raise ParseError(f"{where}.polarity: only value edges carry a polarity")
        _check_endpoint_kinds(kind, nodes[source], nodes[target], where)
        triple = (kind, source, target)
        if triple in seen_triples:
            raise ParseError(f"{where}: duplicate edge {source} -> {target}")
        seen_triples.add(triple)
        edges[edge_id] = MapEdge(edge_id, kind, source, target, polarity)
    return edges


def _check_endpoint_kinds(kind: EdgeKind, source: MapNode, target: MapNode, where: str) -> None:
    if kind is EdgeKind.VALUE:
        if source.kind not in (NodeKind.FEATURE, NodeKind.PROBLEM):
            raise ParseError(f"{where}.source: value edges start at a feature or problem")
        if target.kind is not NodeKind.PROBLEM:
            raise ParseError(f"{where}.target: value edges end at a problem")
        return
    expected_source, expected_target = _EDGE_ENDPOINT_KINDS[kind]
    if source.kind is not expected_source:
        raise ParseError(f"{where}.source: {kind.value} edges start at a {expected_source.value}")
    if target.kind is not expected_target:
        raise ParseError(f"{where}.target: {kind.value} edges end at a {expected_target.value}")


def _parse_product(raw: Any, nodes: dict[str, MapNode]) -> Optional[str]:
    if raw is None:
        if any(n.kind is NodeKind.PRODUCT for n in nodes.values()):
            raise ParseError("product: null but a product node exists")
        return None
    if not isinstance(raw, str):
        raise ParseError("product: expected null or a node id")
    node = nodes.get(raw)
    if node is None:
        raise ParseError(f"product: unknown node {raw!r}")
    if node.kind is not NodeKind.PRODUCT:
        raise ParseError(f"product: {raw} is a {node.kind.value}")
    return raw


def _parse_str(item: dict, key: str, where: str) -> str:
    value = item.get(key)
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where}.{key}: expected a non-empty string")
    return value


def _parse_enum(enum_cls, item: dict, key: str, where: str):
    value = item.get(key)
    if not isinstance(value, str):
        raise ParseError(f"{where}.{key}: expected a string")
    try:
        return enum_cls(value)
    except ValueError as exc:
        raise ParseError(f"{where}.{key}: {value!r} is not one of "
                         f"{[m.value for m in enum_cls]}") from exc
