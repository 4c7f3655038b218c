"""SKOS thesaurus loading, indexing and label matching.

Two input formats are accepted: RDF/XML restricted to the SKOS Core
elements (skos:Concept, skos:prefLabel, skos:altLabel, skos:broader), and a
plain-text fixture format with one concept per line::

    URI | prefLabel | alt1; alt2 | broaderURI1; broaderURI2

Concepts are indexed twice: by URI and by every individual label word, so
one word can fan out to many concepts.  A hit on any label annotates the
matched tokens with the concept and with every ancestor reached over
broader links.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, UnknownConceptError, ValidationError
from .model import Annotation, ConceptRef, SourceKind, Span
from .pipeline import TokenStream, sentence_ids, tokenize

log = logging.getLogger(__name__)

_RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
_SKOS_NS = "http://www.w3.org/2004/02/skos/core#"


@dataclass(frozen=True)
class SkosConcept:
    """One thesaurus concept: a URI, one preferred term, optional extras."""

    uri: str
    pref_label: str
    alt_labels: tuple[str, ...] = ()
    broader: tuple[str, ...] = ()

    def labels(self) -> tuple[str, ...]:
        return (self.pref_label,) + self.alt_labels


def load_skos(path) -> list[SkosConcept]:
    """Read one thesaurus file, auto-detecting the format by content."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read thesaurus file: {exc}", path=str(path)) from exc
    if not raw.strip():
        raise ParseError("empty thesaurus file", path=str(path))
    if raw.lstrip().startswith("<"):
        return _load_rdf_xml(raw, str(path))
    return _load_plain_text(raw, str(path))


def _load_rdf_xml(raw: str, path: str) -> list[SkosConcept]:
    try:
        root = ET.fromstring(raw)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else None
        raise ParseError(f"malformed RDF/XML: {exc.msg}", path=path, line=line) from exc
    concepts = []
    for element in root.iter(f"{{{_SKOS_NS}}}Concept"):
        uri = element.get(f"{{{_RDF_NS}}}about")
        if not uri:
            raise ParseError("skos:Concept element without rdf:about", path=path)
        pref_labels = [
            (child.text or "").strip()
            for child in element.findall(f"{{{_SKOS_NS}}}prefLabel")
        ]
        if len(pref_labels) > 1:
            raise ValidationError(f"concept {uri} carries {len(pref_labels)} prefLabels")
        if not pref_labels or not pref_labels[0]:
            log.warning("skipping concept %s: no prefLabel", uri)
            continue
        alts = tuple(
            (child.text or "").strip()
            for child in element.findall(f"{{{_SKOS_NS}}}altLabel")
            if (child.text or "").strip()
        )
        broader = []
        for child in element.findall(f"{{{_SKOS_NS}}}broader"):
            target = child.get(f"{{{_RDF_NS}}}resource") or (child.text or "").strip()
            if target:
                broader.append(target)
        concepts.append(SkosConcept(uri, pref_labels[0], alts, tuple(broader)))
    return concepts


def _load_plain_text(raw: str, path: str) -> list[SkosConcept]:
    concepts = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [part.strip() for part in line.split("|")]
        if len(fields) < 2:
            raise ParseError("expected 'URI | prefLabel | alts | broader'",
                             path=path, line=lineno)
        uri, pref = fields[0], fields[1]
        if not uri:
            raise ParseError("empty concept URI", path=path, line=lineno)
        if not pref:
            log.warning("skipping concept %s: no prefLabel", uri)
            continue
        alts = _split_list(fields[2]) if len(fields) > 2 else ()
        broader = _split_list(fields[3]) if len(fields) > 3 else ()
        concepts.append(SkosConcept(uri, pref, alts, broader))
    return concepts


def _split_list(cell: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in cell.split(";") if part.strip())


class SkosIndex:
    """Two maps over a concept set: by URI and by lowercased label word.

    Immutable once built; safe to share across documents.
    """

    def __init__(self, concepts: list[SkosConcept]):
        self.by_uri: dict[str, SkosConcept] = {}
        self.by_word: dict[str, list[SkosConcept]] = {}
        # Lowercased token sequences per concept URI, used for matching.
        self._label_tokens: dict[str, list[tuple[str, ...]]] = {}
        for concept in concepts:
            if concept.uri in self.by_uri:
                raise ValidationError(f"duplicate concept URI: {concept.uri}")
            self.by_uri[concept.uri] = concept
        for concept in concepts:
            sequences = []
            for label in concept.labels():
                tokens = tuple(t.surface.lower() for t in tokenize(label))
                if not tokens:
                    continue
                sequences.append(tokens)
                for token in tokenize(label):
                    if not token.is_word():
                        continue
                    bucket = self.by_word.setdefault(token.surface.lower(), [])
                    if concept not in bucket:
                        bucket.append(concept)
            self._label_tokens[concept.uri] = sequences

    def label_token_sequences(self, uri: str) -> list[tuple[str, ...]]:
        return self._label_tokens[uri]


def build_index(concepts: list[SkosConcept]) -> SkosIndex:
    """Index concepts for annotation; duplicate URIs are rejected."""
    return SkosIndex(concepts)


def broader_closure(index: SkosIndex, start: str) -> list[SkosConcept]:
    """Every ancestor of ``start``, breadth-first, each visited once.

    Cycles terminate via the visited set; broader links pointing at unknown
    URIs are skipped with a warning.  The start concept itself is excluded.
    """
    if start not in index.by_uri:
        raise UnknownConceptError(f"unknown concept URI: {start}")
    visited = {start}
    queue = deque(index.by_uri[start].broader)
    ancestors = []
    while queue:
        uri = queue.popleft()
        if uri in visited:
            continue
        visited.add(uri)
        concept = index.by_uri.get(uri)
        if concept is None:
            log.warning("dangling broader link to %s", uri)
            continue
        ancestors.append(concept)
        queue.extend(concept.broader)
    return ancestors


def annotate_skos(text: str, stream: TokenStream, index: SkosIndex,
                  provenance=None) -> list[Annotation]:
    """Match concept labels as consecutive lowercased token sequences.

    Every token anchors a lookup in the word map; each candidate concept's
    labels are then verified around the anchor.  A match annotates the
    covering span with the concept and, on the same span, with every
    ancestor from the broader closure.  Duplicates collapse.
    """
    lowered = [token.surface.lower() for token in stream]
    sentences = sentence_ids(stream)
    hits: dict[tuple[int, int, str], SkosConcept] = {}
    for position, word in enumerate(lowered):
        for concept in index.by_word.get(word, ()):
            for label in index.label_token_sequences(concept.uri):
                length = len(label)
                for anchor_offset in range(length):
                    first = position - anchor_offset
                    last = first + length - 1
                    if first < 0 or last >= len(lowered):
                        continue
                    if tuple(lowered[first : last + 1]) != label:
                        continue
                    if sentences[first] != sentences[last]:
                        continue
                    span = Span(stream[first].span.start, stream[last].span.end)
                    hits.setdefault((span.start, span.end, concept.uri), concept)
    annotations: dict[tuple[int, int, str], Annotation] = {}
    for (start, end, _), concept in hits.items():
        span = Span(start, end)
        chain = [concept] + broader_closure(index, concept.uri)
        for hit in chain:
            key = (start, end, hit.uri)
            annotations.setdefault(key, Annotation(
                span=span,
                surface=span.slice(text),
                source=SourceKind.SKOS,
                concepts=(ConceptRef(id=hit.uri, label=hit.pref_label),),
                provenance=provenance,
            ))
    return [annotations[key] for key in sorted(annotations)]
