"""Deterministic tokenization, POS tagging, n-grams and context windows.

Every annotator consumes the same token stream, so this module has no
knowledge-source dependencies.  The tokenizer is a fixed rule pipeline
(no trained models): split on Unicode whitespace, detach leading/trailing
punctuation into separate tokens, keep internal hyphens and apostrophes.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace

from .model import Span

# Punctuation detached from word edges; each character becomes its own token.
PUNCTUATION = set(".,;:!?()\"'[]{}")

# Tokens that end a sentence; n-grams and context windows never cross them.
SENTENCE_TERMINATORS = {".", "!", "?"}

_NUMBER_RE = re.compile(r"[+-]?\d[\d.,]*")


class POS(enum.Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    OTHER = "OTHER"


# Adjectives before adverbs when a lemma exists under several classes.
_POS_PREFERENCE = (POS.NOUN, POS.VERB, POS.ADJ, POS.ADV)

_SUFFIX_RULES = (
    ("ly", POS.ADV),
    ("ing", POS.VERB),
    ("ed", POS.VERB),
    ("ous", POS.ADJ),
    ("ful", POS.ADJ),
    ("ive", POS.ADJ),
    ("al", POS.ADJ),
)


@dataclass(frozen=True)
class Token:
    surface: str
    span: Span
    pos: POS = POS.OTHER

    def is_word(self) -> bool:
        return any(ch.isalnum() for ch in self.surface)

    def is_sentence_end(self) -> bool:
        return self.surface in SENTENCE_TERMINATORS


@dataclass(frozen=True)
class TokenStream:
    text: str
    tokens: tuple[Token, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]


@dataclass(frozen=True)
class NGram:
    """1..3 consecutive word tokens plus the covering slice of the text."""

    tokens: tuple[Token, ...]
    span: Span
    surface: str


def tokenize(text: str) -> TokenStream:
    """Split ``text`` into offset-faithful tokens.

    Deterministic by construction; each token's surface equals the text
    slice at its span, and tokens never overlap.
    """
    tokens = []
    for match in re.finditer(r"\S+", text):
        chunk = match.group()
        start = match.start()
        end = match.end()
        # Peel leading punctuation.
        while chunk and chunk[0] in PUNCTUATION:
            tokens.append(Token(chunk[0], Span(start, start + 1)))
            chunk = chunk[1:]
            start += 1
        # Peel trailing punctuation, remembering it so it is emitted in
        # textual order after the core token.
        trailing = []
        while chunk and chunk[-1] in PUNCTUATION:
            trailing.append(Token(chunk[-1], Span(end - 1, end)))
            chunk = chunk[:-1]
            end -= 1
        if chunk:
            tokens.append(Token(chunk, Span(start, end)))
        tokens.extend(reversed(trailing))
    return TokenStream(text, tuple(tokens))


def _tag_surface(surface: str, lexicon) -> POS:
    if not any(ch.isalnum() for ch in surface):
        return POS.OTHER
    if _NUMBER_RE.fullmatch(surface):
        return POS.OTHER
    lemma = surface.lower()
    found = [pos for pos in _POS_PREFERENCE if lexicon.has_lemma(lemma, pos)]
    if found:
        return found[0]
    for suffix, pos in _SUFFIX_RULES:
        if len(lemma) > len(suffix) and lemma.endswith(suffix):
            return pos
    return POS.NOUN


def pos_tag(stream: TokenStream, lexicon) -> TokenStream:
    """Tag every token; pure function of (surface, lexicon).

    ``lexicon`` needs a ``has_lemma(lemma, pos) -> bool`` method (see the
    WordNet loader).  Precedence: punctuation/number, then lexicon lookup
    (unique class wins, several classes fall back to a fixed preference
    order), then suffix rules, then NOUN.
    """
    tagged = tuple(replace(t, pos=_tag_surface(t.surface, lexicon)) for t in stream)
    return TokenStream(stream.text, tagged)


def _sentences(stream: TokenStream):
    """Yield runs of word tokens, split at sentence terminators."""
    words = []
    for token in stream:
        if token.is_sentence_end():
            if words:
                yield words
            words = []
        elif token.is_word():
            words.append(token)
    if words:
        yield words


def sentence_ids(stream: TokenStream) -> list[int]:
    """Sentence number per token; a terminator closes its own sentence."""
    ids = []
    current = 0
    for token in stream:
        ids.append(current)
        if token.is_sentence_end():
            current += 1
    return ids


def _make_ngram(stream: TokenStream, window) -> NGram:
    span = Span(window[0].span.start, window[-1].span.end)
    return NGram(tuple(window), span, span.slice(stream.text))


def ngrams(stream: TokenStream) -> list[NGram]:
    """Unigrams, bigrams and trigrams over word tokens, per sentence.

    A sentence of n word tokens yields n unigrams, (n-1) bigrams and (n-2)
    trigrams (never negative); punctuation tokens are skipped and sentence
    terminators are never crossed.  Output lists all unigrams in document
    order, then all bigrams, then all trigrams.
    """
    per_size = {1: [], 2: [], 3: []}
    for words in _sentences(stream):
        for size in (1, 2, 3):
            for i in range(len(words) - size + 1):
                per_size[size].append(_make_ngram(stream, words[i : i + size]))
    return per_size[1] + per_size[2] + per_size[3]


def context_window(stream: TokenStream, index: int, radius: int = 15) -> list[str]:
    """Lowercased word surfaces around the token at ``index``.

    Collects up to ``radius`` words on each side within the center token's
    sentence, skipping punctuation (which does not consume the budget) and
    truncating at document boundaries.  The center occurrence itself is
    excluded.
    """
    if not 0 <= index < len(stream):
        raise IndexError(f"token index {index} out of range 0..{len(stream) - 1}")
    sentences = sentence_ids(stream)
    home = sentences[index]
    left = []
    pos = index - 1
    while pos >= 0 and len(left) < radius and sentences[pos] == home:
        token = stream[pos]
        if token.is_word():
            left.append(token.surface.lower())
        pos -= 1
    left.reverse()
    right = []
    pos = index + 1
    while pos < len(stream) and len(right) < radius and sentences[pos] == home:
        token = stream[pos]
        if token.is_word():
            right.append(token.surface.lower())
        pos += 1
    return left + right
