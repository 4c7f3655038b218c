"""Shared domain types and the standoff annotation document.

Annotations are standoff: they reference the original text by character
offsets (counted in Unicode scalar values) and never modify it.  A document
may carry several annotations over the same span, one per knowledge source
or concept.

Serialized form (UTF-8 JSON, newline-terminated)::

    {"text": ..., "annotations": [
        {"start": 0, "end": 4, "surface": "...", "source": "SKOS",
         "concepts": [{"id": "...", "label": "...", "definition": "..."}],
         "score": 0.5,
         "provenance": {...}}, ...]}

``label``/``definition`` are omitted when absent; ``score`` is present only
on WordNet annotations.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .errors import SpanBoundsError, ValidationError
from .provenance import ProvenanceRecord


class SourceKind(enum.Enum):
    """The four knowledge sources an annotation can come from."""

    SKOS = "SKOS"
    METAMAP = "MetaMap"
    WORDNET = "WordNet"
    DBPEDIA = "DBPedia"


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character range [start, end) into the original text."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise SpanBoundsError(f"invalid span {self.start}..{self.end}")

    def check_bounds(self, text: str) -> None:
        if self.end > len(text):
            raise SpanBoundsError(
                f"span {self.start}..{self.end} exceeds text length {len(text)}"
            )

    def slice(self, text: str) -> str:
        return text[self.start : self.end]


@dataclass(frozen=True)
class ConceptRef:
    """Reference to one concept: identifier plus optional label and gloss."""

    id: str
    label: str | None = None
    definition: str | None = None

    def to_json(self) -> dict:
        obj = {"id": self.id}
        if self.label is not None:
            obj["label"] = self.label
        if self.definition is not None:
            obj["definition"] = self.definition
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "ConceptRef":
        return cls(obj["id"], obj.get("label"), obj.get("definition"))


@dataclass(frozen=True)
class Annotation:
    """One standoff hit: a span, its source, and the matched concept(s).

    ``score`` is the disambiguation score and is present exactly when the
    source is WordNet; the other sources leave it ``None``.  ``provenance``
    may be ``None`` on freshly produced annotations but must be attached
    before the annotation enters a document that gets serialized.
    """

    span: Span
    surface: str
    source: SourceKind
    concepts: tuple[ConceptRef, ...]
    score: float | None = None
    provenance: ProvenanceRecord | None = None

    def __post_init__(self):
        if not self.concepts:
            raise ValidationError("annotation must reference at least one concept")
        if (self.score is not None) != (self.source is SourceKind.WORDNET):
            raise ValidationError(
                "score is carried by WordNet annotations and by no other source"
            )

    def with_provenance(self, record: ProvenanceRecord) -> "Annotation":
        return Annotation(
            self.span, self.surface, self.source, self.concepts, self.score, record
        )

    def sort_key(self):
        return (
            self.span.start,
            self.span.end,
            self.source.value,
            tuple(c.id for c in self.concepts),
        )

    def dedup_key(self):
        # Exact duplicate = same span, same source, same concept set.
        return (
            self.span.start,
            self.span.end,
            self.source,
            frozenset(c.id for c in self.concepts),
        )

    def to_json(self) -> dict:
        if self.provenance is None:
            raise ValidationError(
                f"annotation at {self.span.start}..{self.span.end} has no provenance"
            )
        obj = {
            "start": self.span.start,
            "end": self.span.end,
            "surface": self.surface,
            "source": self.source.value,
            "concepts": [c.to_json() for c in self.concepts],
        }
        if self.score is not None:
            obj["score"] = self.score
        obj["provenance"] = self.provenance.to_json()
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Annotation":
        score = obj.get("score")
        return cls(
            span=Span(obj["start"], obj["end"]),
            surface=obj["surface"],
            source=SourceKind(obj["source"]),
            concepts=tuple(ConceptRef.from_json(c) for c in obj["concepts"]),
            score=float(score) if score is not None else None,
            provenance=ProvenanceRecord.from_json(obj["provenance"]),
        )


@dataclass(frozen=True)
class AnnotatedDocument:
    """The original text plus its annotations, sorted and deduplicated.

    The annotation list is kept in a total, deterministic order:
    (span.start, span.end, source name, concept ids).  Instances are
    immutable; use :func:`add_annotation` to derive extended documents.
    """

    text: str
    annotations: tuple[Annotation, ...] = field(default_factory=tuple)

    @classmethod
    def build(cls, text: str, annotations) -> "AnnotatedDocument":
        """Validate, deduplicate and sort ``annotations`` against ``text``."""
        seen = {}
        for ann in annotations:
            ann.span.check_bounds(text)
            seen.setdefault(ann.dedup_key(), ann)
        ordered = sorted(seen.values(), key=Annotation.sort_key)
        return cls(text, tuple(ordered))


def add_annotation(doc: AnnotatedDocument, ann: Annotation) -> AnnotatedDocument:
    """Return a new document containing ``ann``; exact duplicates collapse."""
    return AnnotatedDocument.build(doc.text, doc.annotations + (ann,))


def serialize_document(doc: AnnotatedDocument) -> bytes:
    """Emit the standoff JSON format, UTF-8 encoded and newline-terminated."""
    obj = {
        "text": doc.text,
        "annotations": [ann.to_json() for ann in doc.annotations],
    }
    return json.dumps(obj, ensure_ascii=False).encode("utf-8") + b"\n"


def deserialize_document(data: bytes | str) -> AnnotatedDocument:
    """Inverse of :func:`serialize_document`."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    obj = json.loads(data)
    anns = [Annotation.from_json(a) for a in obj["annotations"]]
    return AnnotatedDocument.build(obj["text"], anns)
