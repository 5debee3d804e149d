"""K-fold evaluation: intent accuracy, macro-F1, confusion, clause matches."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

from .classifier import Intent, classify, train
from .corpus import LabeledUtterance


class CorpusTooSmall(ValueError):
    pass


@dataclass
class Metrics:
    accuracy: float
    macro_f1: float
    clause_match_rate: float
    confusion: dict[tuple[str, str], int] = field(default_factory=dict)
    folds: int = 0
    size: int = 0

    def to_payload(self) -> dict[str, Any]:
        return {
            "accuracy": round(self.accuracy, 4),
            "macro_f1": round(self.macro_f1, 4),
            "clause_match_rate": round(self.clause_match_rate, 4),
            "folds": self.folds,
            "size": self.size,
            "confusion": {f"{true}->{pred}": n for (true, pred), n in sorted(self.confusion.items())},
        }

    def confusion_table(self) -> str:
        """Plain-text matrix, rows = true intent, columns = predicted."""
        labels = sorted({t for t, _ in self.confusion} | {p for _, p in self.confusion})
        if not labels:
            return "(no predictions)"
        width = max(len(label) for label in labels) + 2
        header = " " * width + "".join(label.rjust(width) for label in labels)
        rows = [header]
        for true in labels:
            cells = "".join(str(self.confusion.get((true, pred), 0)).rjust(width) for pred in labels)
            rows.append(true.rjust(width) + cells)
        return "\n".join(rows)


def fold_of(text: str, folds: int) -> int:
    """Stable fold assignment from a content hash of the utterance."""
    digest = hashlib.md5(text.encode("utf-8")).hexdigest()
    return int(digest, 16) % folds


def evaluate(corpus: list[LabeledUtterance], folds: int) -> Metrics:
    """Cross-validate the classifier with every intent admissible."""
    if folds < 2:
        raise ValueError("folds must be at least 2")
    if len(corpus) < folds:
        raise CorpusTooSmall(f"need at least {folds} utterances, got {len(corpus)}")

    all_intents = set(Intent)
    confusion: dict[tuple[str, str], int] = {}
    correct = total = 0
    clause_hits = clause_total = 0

    for fold in range(folds):
        test = [item for item in corpus if fold_of(item.text, folds) == fold]
        training = [item for item in corpus if fold_of(item.text, folds) != fold]
        if not test or not training:
            continue
        model = train(training)
        for item in test:
            result = classify(model, item.text, all_intents)
            total += 1
            key = (item.intent.value, result.intent.value)
            confusion[key] = confusion.get(key, 0) + 1
            if result.intent is item.intent:
                correct += 1
            if item.clause_text is not None:
                clause_total += 1
                if result.clause is not None and result.clause.text == item.clause_text:
                    clause_hits += 1

    accuracy = correct / total if total else 0.0
    clause_rate = clause_hits / clause_total if clause_total else 1.0
    return Metrics(
        accuracy=accuracy,
        macro_f1=_macro_f1(confusion, sorted({i.intent.value for i in corpus})),
        clause_match_rate=clause_rate,
        confusion=confusion,
        folds=folds,
        size=len(corpus),
    )


def _macro_f1(confusion: dict[tuple[str, str], int], labels: list[str]) -> float:
    if not labels:
        return 0.0
    scores = []
    for label in labels:
        tp = confusion.get((label, label), 0)
        fp = sum(n for (t, p), n in confusion.items() if p == label and t != label)
        fn = sum(n for (t, p), n in confusion.items() if t == label and p != label)
        denominator = 2 * tp + fp + fn
        scores.append(2 * tp / denominator if denominator else 0.0)
    return sum(scores) / len(scores)
