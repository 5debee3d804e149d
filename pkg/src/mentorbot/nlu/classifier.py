"""Intent resolution: control lexicons, extraction rules, statistical fallback.

Resolution is scoped by the set of intents the dialogue state admits, which
carries most of the disambiguation burden. Exact control-word matches win
outright; polarity answers are matched against small lexicons; content
intents are filled by the extraction rules when the state leaves no choice;
only then does a smoothed bag-of-features model decide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from ..cogmap import ClauseForm, ClauseKind, Polarity
from .extract import Clause, EmptyUtterance, extract, normalize
from .tags import pos_tag, tokenize


class Intent(str, Enum):
    PRODUCT_NAME = "product_name"
    CUSTOMER_DESCRIPTION = "customer_description"
    DESIRE_DESCRIPTION = "desire_description"
    DIFFICULTY_DESCRIPTION = "difficulty_description"
    FEATURE_DESCRIPTION = "feature_description"
    TARGET_REFERENCE = "target_reference"
    POLARITY_ANSWER = "polarity_answer"
    AFFIRM = "affirm"
    DENY = "deny"
    HELP_REQUEST = "help_request"
    STOP = "stop"


CONTENT_INTENTS = frozenset({
    Intent.PRODUCT_NAME,
    Intent.CUSTOMER_DESCRIPTION,
    Intent.DESIRE_DESCRIPTION,
    Intent.DIFFICULTY_DESCRIPTION,
    Intent.FEATURE_DESCRIPTION,
    Intent.TARGET_REFERENCE,
})

GLOBAL_INTENTS = frozenset({Intent.HELP_REQUEST, Intent.STOP})


class EmptyAdmissibleSet(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class ParseResult:
    intent: Intent
    confidence: float
    clause: Optional[Clause] = None
    polarity: Optional[Polarity] = None
    matched_rule: Optional[str] = None


AFFIRM_PHRASES = frozenset({
    "yes", "y", "yeah", "yep", "yup", "sure", "ok", "okay", "of course",
    "correct", "right", "exactly", "absolutely", "yes please", "sounds good",
})

DENY_PHRASES = frozenset({
    "no", "n", "nope", "nah", "no thanks", "no thank you", "not really",
    "that's all", "that is all", "nothing else", "no more", "i'm done",
    "we're done", "not now",
})

HELP_PHRASES = frozenset({
    "help", "help me", "what do you mean", "i don't understand",
    "i do not understand", "i don't get it", "can you explain", "explain",
    "what", "huh", "pardon", "sorry what", "i'm confused", "i am confused",
    "what should i say", "can you rephrase", "could you rephrase",
})

STOP_PHRASES = frozenset({
    "stop", "quit", "exit", "abort", "end the session", "end session",
    "let's stop", "lets stop", "goodbye", "bye", "finish", "stop the interview",
    "i want to stop",
})

_POLARITY_TERMS: list[tuple[str, Polarity]] = sorted(
    [
        ("positive", Polarity.INCREASE),
        ("increase", Polarity.INCREASE),
        ("increases", Polarity.INCREASE),
        ("increasing", Polarity.INCREASE),
        ("more", Polarity.INCREASE),
        ("+", Polarity.INCREASE),
        ("negative", Polarity.DECREASE),
        ("decrease", Polarity.DECREASE),
        ("decreases", Polarity.DECREASE),
        ("decreasing", Polarity.DECREASE),
        ("reduce", Polarity.DECREASE),
        ("reduces", Polarity.DECREASE),
        ("less", Polarity.DECREASE),
        ("lower", Polarity.DECREASE),
        ("lowers", Polarity.DECREASE),
        ("-", Polarity.DECREASE),
        ("minus", Polarity.DECREASE),
        ("neutral", Polarity.NEUTRAL),
        ("no effect", Polarity.NEUTRAL),
        ("does not affect", Polarity.NEUTRAL),
        ("doesn't affect", Polarity.NEUTRAL),
        ("not affect", Polarity.NEUTRAL),
        ("nothing", Polarity.NEUTRAL),
        ("none", Polarity.NEUTRAL),
        ("/o/", Polarity.NEUTRAL),
    ],
    key=lambda item: -len(item[0]),
)


def canonical(text: str) -> str:
    """Lowercased, punctuation-trimmed form used for exact lexicon lookups."""
    return normalize(text).lower().strip(" \t.,!?;:()\"'")


def match_polarity(text: str) -> Optional[Polarity]:
    """Earliest polarity term in the text; longer terms are tried first."""
    haystack = f" {canonical(text)} "
    best: tuple[int, int, Polarity] | None = None
    for term, polarity in _POLARITY_TERMS:
        if term.isalpha() or " " in term:
            position = haystack.find(f" {term} ")
        else:
            position = haystack.find(term)
        if position == -1:
            continue
        key = (position, -len(term), polarity)
        if best is None or key < best:
            best = key
    return best[2] if best else None


def featurize(text: str) -> list[str]:
    """Lowercased unigrams, word bigrams, and POS-tag bigrams.

    Bigrams are padded with boundary sentinels so one-word answers still
    produce evidence and utterance-initial cues count.
    """
    tokens = pos_tag(tokenize(normalize(text)))
    words = [t.lower for t in tokens]
    features = [f"u:{w}" for w in words]
    padded = ["<s>", *words, "</s>"]
    features.extend(f"b:{a} {b}" for a, b in zip(padded, padded[1:]))
    tags = ["<s>", *(t.tag.value for t in tokens), "</s>"]
    features.extend(f"t:{a} {b}" for a, b in zip(tags, tags[1:]))
    return features


@dataclass
class ClassifierModel:
    """Add-one-smoothed multinomial model over bag-of-features counts."""

    class_counts: dict[Intent, int] = field(default_factory=dict)
    feature_counts: dict[Intent, dict[str, int]] = field(default_factory=dict)
    feature_totals: dict[Intent, int] = field(default_factory=dict)
    vocabulary: set[str] = field(default_factory=set)
    total_examples: int = 0

    @property
    def intents(self) -> list[Intent]:
        return sorted(self.class_counts, key=lambda i: i.value)

    def log_score(self, intent: Intent, features: Sequence[str]) -> float:
        prior = math.log(self.class_counts[intent] / self.total_examples)
        counts = self.feature_counts[intent]
        denominator = self.feature_totals[intent] + len(self.vocabulary)
        score = prior
        for feature in features:
            if feature not in self.vocabulary:
                continue
            score += math.log((counts.get(feature, 0) + 1) / denominator)
        return score

    def posteriors(self, text: str, candidates: Iterable[Intent]) -> dict[Intent, float]:
        """Posterior over the candidate intents, renormalized to sum to 1."""
        features = featurize(text)
        known = [i for i in sorted(candidates, key=lambda i: i.value) if i in self.class_counts]
        if not known:
            return {}
        scores = {intent: self.log_score(intent, features) for intent in known}
        peak = max(scores.values())
        weights = {intent: math.exp(score - peak) for intent, score in scores.items()}
        total = sum(weights.values())
        return {intent: weight / total for intent, weight in weights.items()}


def train(corpus) -> ClassifierModel:
    """Build the smoothed frequency tables; deterministic given corpus order."""
    items = list(corpus)
    if not items:
        raise EmptyCorpus("cannot train on an empty corpus")
    model = ClassifierModel()
    for item in items:
        intent = item.intent
        model.class_counts[intent] = model.class_counts.get(intent, 0) + 1
        counts = model.feature_counts.setdefault(intent, {})
        for feature in featurize(item.text):
            counts[feature] = counts.get(feature, 0) + 1
            model.feature_totals[intent] = model.feature_totals.get(intent, 0) + 1
            model.vocabulary.add(feature)
        model.feature_totals.setdefault(intent, 0)
    model.total_examples = len(items)
    return model


def _extract_or_none(text: str):
    try:
        return extract(text)
    except EmptyUtterance:
        return None


def classify(model: ClassifierModel, text: str, admissible: Iterable[Intent], *,
             threshold: float = 0.5) -> ParseResult:
    """Resolve an utterance against the intents the current state admits.

    Help and stop are always admissible. Below-threshold statistical results
    come back as ``help_request`` with ``matched_rule="low_confidence"`` so
    the caller can ask for clarification instead of guessing.
    """
    admitted = set(admissible)
    if not admitted:
        raise EmptyAdmissibleSet("at least one intent must be admissible")
    admitted |= GLOBAL_INTENTS
    canon = canonical(text)

    if Intent.AFFIRM in admitted and canon in AFFIRM_PHRASES:
        return ParseResult(Intent.AFFIRM, 1.0, matched_rule="control:affirm")
    if Intent.DENY in admitted and canon in DENY_PHRASES:
        return ParseResult(Intent.DENY, 1.0, matched_rule="control:deny")
    if canon in HELP_PHRASES:
        return ParseResult(Intent.HELP_REQUEST, 1.0, matched_rule="control:help")
    if canon in STOP_PHRASES:
        return ParseResult(Intent.STOP, 1.0, matched_rule="control:stop")

    content = sorted(admitted & CONTENT_INTENTS, key=lambda i: i.value)

    if Intent.POLARITY_ANSWER in admitted:
        polarity = match_polarity(text)
        if polarity is not None:
            return ParseResult(Intent.POLARITY_ANSWER, 1.0, polarity=polarity,
                               matched_rule="polarity:lexicon")
        if not content:
            # The state wanted a polarity and nothing matched; signal a re-ask.
            return ParseResult(Intent.HELP_REQUEST, 0.0, matched_rule="polarity_unmatched")

    if content:
        extracted = _extract_or_none(text)
        if extracted is None:
            return ParseResult(Intent.HELP_REQUEST, 0.0, matched_rule="empty_utterance")
        kind, clause, rule_id = extracted
        confidence = 0.9 if rule_id is not None else 0.6
        if len(content) == 1:
            return ParseResult(content[0], confidence, clause=clause,
                               matched_rule=rule_id or "extract:fallback")
        pair = {Intent.DESIRE_DESCRIPTION, Intent.DIFFICULTY_DESCRIPTION}
        if set(content) == pair:
            if kind is ClauseKind.DESIRE:
                intent = Intent.DESIRE_DESCRIPTION
            elif kind is ClauseKind.DIFFICULTY:
                intent = Intent.DIFFICULTY_DESCRIPTION
            elif clause.form is ClauseForm.NOUN_PHRASE:
                intent = Intent.DIFFICULTY_DESCRIPTION
            else:
                intent = Intent.DESIRE_DESCRIPTION
            return ParseResult(intent, confidence, clause=clause,
                               matched_rule=rule_id or "extract:fallback")

    posteriors = model.posteriors(text, admitted)
    if not posteriors:
        return ParseResult(Intent.HELP_REQUEST, 0.0, matched_rule="low_confidence")
    intent, confidence = min(posteriors.items(), key=lambda kv: (-kv[1], kv[0].value))
    if confidence < threshold:
        return ParseResult(Intent.HELP_REQUEST, confidence, matched_rule="low_confidence")
    if intent in CONTENT_INTENTS:
        extracted = _extract_or_none(text)
        if extracted is None:
            return ParseResult(Intent.HELP_REQUEST, 0.0, matched_rule="empty_utterance")
        _, clause, _ = extracted
        return ParseResult(intent, confidence, clause=clause, matched_rule="model")
    if intent is Intent.POLARITY_ANSWER:
        polarity = match_polarity(text)
        if polarity is None:
            return ParseResult(Intent.HELP_REQUEST, confidence, matched_rule="polarity_unmatched")
        return ParseResult(intent, confidence, polarity=polarity, matched_rule="model")
    return ParseResult(intent, confidence, matched_rule="model")
