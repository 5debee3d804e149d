"""Tokenizer and heuristic part-of-speech tagger.

The downstream consumer only needs a coarse verb/noun split at clause
boundaries, so tagging is lexicon-first with a few suffix heuristics and a
noun default; there is no statistical model.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class Tag(str, Enum):
    VERB = "VERB"
    NOUN = "NOUN"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    DET = "DET"
    PREP = "PREP"
    CONJ = "CONJ"
    NUM = "NUM"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int

    @property
    def lower(self) -> str:
        return self.text.lower()


@dataclass(frozen=True)
class TaggedToken(Token):
    tag: Tag = Tag.OTHER


# Splits clitics off their host ("it's" -> it 's, "don't" -> do n't) and
# keeps punctuation as standalone tokens.
_TOKEN_RE = re.compile(r"[a-z0-9]+(?=n't)|n't|'[a-z]+|[a-z0-9]+|[^\s]", re.IGNORECASE)

_LEXICON: dict[str, Tag] = {}


def _enter(tag: Tag, words: str) -> None:
    for word in words.split():
        _LEXICON[word] = tag


_enter(Tag.PRON, """
    i you he she it we they me him her us them my your his its our their
    mine yours theirs this that these those who whom whose what which
    someone something anyone anything everyone everything nobody nothing
    myself yourself himself herself itself ourselves themselves
""")
_enter(Tag.DET, """
    a an the some any no every each either neither another both all few
    many several most much such
""")
_enter(Tag.PREP, """
    of in on at by for with about against between into through during
    before after above below to from up down out off over under near
    without within along across behind beyond per via
""")
_enter(Tag.CONJ, """
    and or but nor so yet because since although though while if unless
    until when whenever where as than whether
""")
_enter(Tag.NUM, """
    zero one two three four five six seven eight nine ten first second
    third fourth fifth
""")
_enter(Tag.VERB, """
    am is are was were be been being have has had having do does did doing
    will would shall should can could may might must want wants wanted
    need needs needed like likes liked use uses used find finds found
    book books booked take takes took taken pay pays paid order orders
    ordered get gets got make makes made go goes went see sees saw know
    knows knew think thinks thought help helps helped let lets allow
    allows enable enables enabled struggle struggles struggled face faces
    faced reach reaches reached split splits share shares shared track
    tracks tracked plan plans save saves rate rates request requests
    compare compares schedule schedules attract attracts export exports
    keep keeps give gives offer offers buy buys sell sells send sends
    connect connects manage manages increase increases decrease decreases
    reduce reduces affect affects improve improves avoid avoids spend
    spends wait waits charge charges deliver delivers play plays work
    works call calls come comes arrive arrives eat eats learn learns
    cook cooks walk walks drive drives visit visits stay stays
    's 're 've 'll 'd 'm
""")
_enter(Tag.ADJ, """
    good bad high low hard difficult easy new old big small long short
    expensive cheap fast slow safe unsafe reliable unreliable simple late
    early busy free full empty available unavailable unknown main quick
    strange confusing
""")
_enter(Tag.ADV, """
    not very too also just only really quite often never always sometimes
    usually there here now then soon already still again quickly easily
    live n't
""")

# Checked in order after the lexicon; (suffix, tag, minimum token length).
_SUFFIX_RULES = (
    ("ing", Tag.VERB, 5),
    ("ed", Tag.VERB, 4),
    ("ly", Tag.ADV, 4),
    ("tion", Tag.NOUN, 6),
    ("ness", Tag.NOUN, 6),
    ("ity", Tag.NOUN, 5),
    ("ment", Tag.NOUN, 6),
    ("ous", Tag.ADJ, 5),
    ("ful", Tag.ADJ, 5),
    ("ive", Tag.ADJ, 5),
)


def tokenize(text: str) -> list[Token]:
    """Split on whitespace and punctuation, keeping punctuation tokens."""
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def tag_word(word: str) -> Tag:
    lowered = word.lower()
    if not any(ch.isalnum() for ch in lowered) and lowered not in _LEXICON:
        return Tag.OTHER
    if lowered.isdigit():
        return Tag.NUM
    if lowered in _LEXICON:
        return _LEXICON[lowered]
    for suffix, tag, min_len in _SUFFIX_RULES:
        if len(lowered) >= min_len and lowered.endswith(suffix):
            return tag
    return Tag.NOUN


def pos_tag(tokens: list[Token]) -> list[TaggedToken]:
    return [TaggedToken(t.text, t.start, t.end, tag_word(t.text)) for t in tokens]
