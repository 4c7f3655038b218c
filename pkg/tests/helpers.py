"""Shared hypothesis strategies and brute-force oracles.

The oracles deliberately re-derive expected values with the plainest code
possible (list slicing, substring scans, naive fractions) so the library
implementations are checked against an independent path.
"""

from fractions import Fraction

from hypothesis import strategies as st

from semannot.model import AnnotatedDocument, Annotation, ConceptRef, SourceKind, Span
from semannot.provenance import ProvenanceRecord

_WORDS = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=8)


def provenance_records():
    return st.builds(
        ProvenanceRecord,
        agent_name=_WORDS,
        agent_version=st.sampled_from(["1.0", "2.3.1", "0.9"]),
        annotation_system=st.sampled_from([k.value for k in SourceKind]),
        source=st.just("semannot"),
        environment_description=_WORDS,
        date_time=st.just("2024-05-14T12:00:00Z"),
        location=_WORDS,
    )


def concept_refs():
    return st.builds(
        ConceptRef,
        id=st.text(min_size=1, max_size=30),
        label=st.none() | _WORDS,
        definition=st.none() | st.text(max_size=40),
    )


@st.composite
def annotations_for(draw, text):
    start = draw(st.integers(min_value=0, max_value=len(text) - 1))
    end = draw(st.integers(min_value=start + 1, max_value=len(text)))
    source = draw(st.sampled_from(list(SourceKind)))
    if source is SourceKind.WORDNET:
        score = draw(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
    else:
        score = None
    record = draw(provenance_records())
    concepts = tuple(draw(st.lists(concept_refs(), min_size=1, max_size=3)))
    span = Span(start, end)
    return Annotation(
        span=span,
        surface=text[start:end],
        source=source,
        concepts=concepts,
        score=score,
        provenance=record,
    )


@st.composite
def documents(draw):
    text = draw(st.text(min_size=0, max_size=60))
    if not text:
        return AnnotatedDocument.build(text, [])
    anns = draw(st.lists(annotations_for(text), max_size=8))
    return AnnotatedDocument.build(text, anns)


# -- brute-force oracles -------------------------------------------------


def naive_overlap_score(definition_words, context):
    """Proportion of distinct definition words present in the context."""
    distinct = set(definition_words)
    length = len(distinct) if distinct else 1
    hits = 0
    for word in distinct:
        if word in list(context):
            hits += 1
    return Fraction(hits, length)


def naive_occurrence_count(text, phrase):
    """Scan every position for a case-insensitive token-boundary match."""
    needle = phrase.lower()
    count = 0
    positions = []
    for i in range(len(text) - len(phrase) + 1):
        j = i + len(phrase)
        if text[i:j].lower() != needle:
            continue
        before_ok = i == 0 or not text[i - 1].isalnum()
        after_ok = j == len(text) or not text[j].isalnum()
        if before_ok and after_ok:
            count += 1
            positions.append((i, j))
    return count, positions


def naive_window(word_positions, sentence_of, center_index, radius):
    """Slice the in-sentence word list around the center token position.

    ``word_positions`` is [(stream_index, lowercased_surface)] for word
    tokens only; ``sentence_of`` maps stream index -> sentence number.
    """
    sentence = sentence_of[center_index]
    same = [(i, w) for i, w in word_positions if sentence_of[i] == sentence]
    left = [w for i, w in same if i < center_index][-radius:]
    right = [w for i, w in same if i > center_index][:radius]
    return left + right
