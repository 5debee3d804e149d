"""Utterance normalization and ordered clause-extraction rules.

Founders answer the same question in many shapes ("to book a ride",
"because it is hard to find a cab in some places"). The rules below strip
discourse framing and pull out the span that fills a map element, together
with whether it reads as a desire or a difficulty and whether it is a verb
or a noun phrase.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..cogmap import ClauseForm, ClauseKind
from .tags import Tag, pos_tag, tokenize


class EmptyUtterance(ValueError):
    """The utterance contains no usable text after normalization."""


@dataclass(frozen=True)
class Clause:
    text: str
    form: ClauseForm


DISCOURSE_MARKERS = frozenset({"because", "since", "well", "so", "actually"})

_TRAILING_PUNCT = ".!?,;:"

_SUBJECT = r"(?:they|he|she|users|customers|people)"

# First match wins; every pattern is anchored to the normalized utterance.
_RULES: list[tuple[str, ClauseKind | None, ClauseForm, re.Pattern[str]]] = [
    ("desire:want_to", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE,
     re.compile(rf"^(?:{_SUBJECT}\s+)?(?:want|wants|would like|need|needs)\s+to\s+(?P<x>.+)$", re.I)),
    ("desire:bare_to", ClauseKind.DESIRE, ClauseForm.VERB_PHRASE,
     re.compile(r"^to\s+(?P<x>.+)$", re.I)),
    ("difficulty:hard_to", ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE,
     re.compile(r"^it(?:'s|\s+is|\s+was)\s+(?:hard|difficult)\s+to\s+(?P<x>.+)$", re.I)),
    ("difficulty:struggle_to", ClauseKind.DIFFICULTY, ClauseForm.VERB_PHRASE,
     re.compile(r"^(?:they|users|people)\s+(?:struggle|find it hard)\s+to\s+(?P<x>.+)$", re.I)),
    ("difficulty:face_np", ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE,
     re.compile(r"^(?:they|users|people)\s+(?:face|have|pay)\s+(?P<x>.+)$", re.I)),
    ("difficulty:there_is", ClauseKind.DIFFICULTY, ClauseForm.NOUN_PHRASE,
     re.compile(r"^there\s+(?:is|are)\s+(?P<x>.+)$", re.I)),
    ("feature:allows_to", None, ClauseForm.VERB_PHRASE,
     re.compile(r"^(?:the app|the product|it)\s+(?:allows|lets|enables)\s+"
                r"(?:(?:the\s+users?|the\s+user|them|users)\s+)?to\s+(?P<x>.+)$", re.I)),
    ("feature:users_can", None, ClauseForm.VERB_PHRASE,
     re.compile(r"^users\s+can\s+(?P<x>.+)$", re.I)),
]


def normalize(text: str) -> str:
    """Trim, collapse whitespace, and strip leading discourse markers."""
    s = " ".join(text.split())
    while s:
        if s.startswith(","):
            s = s[1:].lstrip()
            continue
        head, _, rest = s.partition(" ")
        if head.rstrip(",").lower() in DISCOURSE_MARKERS:
            s = rest.lstrip()
            continue
        break
    return s


def _clean_span(span: str) -> str:
    return span.strip().rstrip(_TRAILING_PUNCT).rstrip()


def _starts_with_verb(span: str) -> bool:
    tagged = pos_tag(tokenize(span))
    return bool(tagged) and tagged[0].tag is Tag.VERB


def _fallback_form(text: str) -> ClauseForm:
    for token in pos_tag(tokenize(text)):
        if token.tag in (Tag.PRON, Tag.DET):
            continue
        return ClauseForm.VERB_PHRASE if token.tag is Tag.VERB else ClauseForm.NOUN_PHRASE
    return ClauseForm.NOUN_PHRASE


def extract(text: str) -> tuple[ClauseKind | None, Clause, str | None]:
    """Like :func:`extract_clause` but also reports which rule matched."""
    normalized = normalize(text)
    if not normalized:
        raise EmptyUtterance("utterance is empty")
    for rule_id, kind, form, pattern in _RULES:
        match = pattern.match(normalized)
        if match is None:
            continue
        span = _clean_span(match.group("x"))
        if not span:
            continue
        if rule_id == "desire:bare_to" and not _starts_with_verb(span):
            continue
        return kind, Clause(span, form), rule_id
    whole = _clean_span(normalized)
    if not whole:
        raise EmptyUtterance("utterance is only punctuation")
    return None, Clause(whole, _fallback_form(whole)), None


def extract_clause(text: str) -> tuple[ClauseKind | None, Clause]:
    """Pull the map-filling span out of an utterance.

    Returns the clause kind when a desire or difficulty framing was
    recognized (None otherwise, including for feature phrasings) and the
    clause itself. Falls back to the whole normalized utterance.
    """
    kind, clause, _ = extract(text)
    return kind, clause
