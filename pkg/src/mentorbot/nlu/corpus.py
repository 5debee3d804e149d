"""Labeled-utterance corpus: JSON Lines parsing and the bundled seed set."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from ..cogmap import ClauseForm
from .classifier import Intent
from .extract import normalize


class CorpusFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledUtterance:
    text: str
    intent: Intent
    clause_text: Optional[str] = None
    clause_form: Optional[ClauseForm] = None


def parse_corpus(lines, source: str = "<corpus>") -> list[LabeledUtterance]:
    items: list[LabeledUtterance] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        where = f"{source}:{lineno}"
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"{where}: {exc.msg}") from exc
        if not isinstance(obj, dict) or not isinstance(obj.get("text"), str):
            raise CorpusFormatError(f"{where}: expected an object with a 'text' string")
        try:
            intent = Intent(obj["intent"])
        except (KeyError, ValueError) as exc:
            raise CorpusFormatError(f"{where}: bad intent {obj.get('intent')!r}") from exc
        clause = obj.get("clause")
        form = None
        if "clause_form" in obj:
            try:
                form = ClauseForm(obj["clause_form"])
            except ValueError as exc:
                raise CorpusFormatError(f"{where}: bad clause_form {obj['clause_form']!r}") from exc
        if clause is not None:
            if not isinstance(clause, str):
                raise CorpusFormatError(f"{where}: clause must be a string")
            if clause not in normalize(obj["text"]):
                raise CorpusFormatError(
                    f"{where}: clause {clause!r} is not a substring of the normalized text")
        items.append(LabeledUtterance(obj["text"], intent, clause, form))
    return items


def load_corpus(path: str | Path) -> list[LabeledUtterance]:
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        return parse_corpus(handle, source=str(path))


def seed_corpus_path() -> Path:
    return Path(str(resources.files(__package__) / "data" / "seed_corpus.jsonl"))


def load_seed_corpus() -> list[LabeledUtterance]:
    return load_corpus(seed_corpus_path())
