"""Shared fixtures: golden paths, the engine, and a random valid-map generator."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from mentorbot.cogmap import (
    ClauseForm,
    ClauseKind,
    CognitiveMap,
    DuplicateEdge,
    EdgeKind,
    Polarity,
)
from mentorbot.dialogue import DialogueEngine

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def uber_script() -> list[str]:
    lines = (GOLDEN_DIR / "uber_script.jsonl").read_text().splitlines()
    return [json.loads(line)["text"] for line in lines if line.strip()]


@pytest.fixture(scope="session")
def engine() -> DialogueEngine:
    return DialogueEngine()


def build_random_map(rng: random.Random, refinements: int | None = None) -> CognitiveMap:
    """A structurally valid map assembled from random operations."""
    cmap = CognitiveMap()
    cmap.set_product(f"product {rng.randrange(1000)}")
    customers = [cmap.add_customer(f"segment {i}") for i in range(rng.randint(1, 3))]
    problems = []
    for customer in customers:
        for _ in range(rng.randint(1, 3)):
            problem_id, _ = cmap.add_problem(
                f"issue {len(problems)}",
                rng.choice(list(ClauseKind)),
                rng.choice(list(ClauseForm)),
                customer,
            )
            problems.append(problem_id)
    features = []
    for i in range(rng.randint(1, 4)):
        feature_id, _, _ = cmap.add_feature(
            f"capability {i}",
            rng.choice(list(ClauseForm)),
            rng.choice(problems),
            rng.choice(list(Polarity)),
        )
        features.append(feature_id)
    for _ in range(rng.randint(0, 3)):
        try:
            cmap.link_feature_to_problem(rng.choice(features), rng.choice(problems),
                                         rng.choice(list(Polarity)))
        except DuplicateEdge:
            pass
    rounds = rng.randint(0, 3) if refinements is None else refinements
    for _ in range(rounds):
        candidates = [e for e in cmap.sorted_edges() if e.kind is not EdgeKind.FEASIBILITY]
        edge = rng.choice(candidates)
        upper = rng.choice(list(Polarity)) if edge.kind is EdgeKind.VALUE else None
        cmap.refine_edge(edge.id, f"underlying {rng.randrange(10**6)}",
                         rng.choice(list(ClauseKind)), rng.choice(list(ClauseForm)),
                         rng.choice(list(Polarity)), upper)
    return cmap
