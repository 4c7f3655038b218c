"""Client for an external concept-mapper service (MetaMap-style).

The mapper itself is an opaque server: it receives the document text and
returns concept mappings (identifier, preferred name, matched phrase).
This client only forwards the text and enriches the returned mappings with
prevalence (how often the phrase occurs in the document) and the character
span of every occurrence.

Wire protocol: one TCP connection per request, newline-delimited JSON
frames.  Request ``{"v": 1, "op": "map", "text": "..."}``, response
``{"v": 1, "mappings": [{"id": ..., "name": ..., "phrase": ..., "score": ...}]}``.
"""

from __future__ import annotations

import json
import logging
import socket
from dataclasses import dataclass

from .errors import EndpointUnreachableError, ProtocolError
from .model import Annotation, ConceptRef, SourceKind, Span

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1


@dataclass(frozen=True)
class MapperEndpoint:
    host: str
    port: int
    timeout: float = 10.0

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class ConceptMapping:
    concept_id: str
    preferred_name: str
    matched_phrase: str
    mapper_score: float | None = None


@dataclass(frozen=True)
class EnrichedMapping:
    mapping: ConceptMapping
    prevalence: int
    occurrences: tuple[Span, ...]


def request_mappings(text: str, endpoint: MapperEndpoint) -> list[ConceptMapping]:
    """Send one request frame, read one response frame, parse the mappings."""
    frame = json.dumps({"v": PROTOCOL_VERSION, "op": "map", "text": text},
                       ensure_ascii=False)
    try:
        with socket.create_connection((endpoint.host, endpoint.port),
                                      timeout=endpoint.timeout) as conn:
            conn.sendall(frame.encode("utf-8") + b"\n")
            with conn.makefile("rb") as reader:
                line = reader.readline()
    except OSError as exc:
        raise EndpointUnreachableError(
            f"concept mapper at {endpoint.host}:{endpoint.port} unreachable: {exc}"
        ) from exc
    if not line:
        raise ProtocolError("connection closed before a response frame arrived")
    try:
        payload = json.loads(line.decode("utf-8"))
        mappings = []
        for entry in payload["mappings"]:
            mapping = ConceptMapping(
                concept_id=entry["id"],
                preferred_name=entry.get("name", ""),
                matched_phrase=entry["phrase"],
                mapper_score=entry.get("score"),
            )
            if not mapping.concept_id or not mapping.matched_phrase:
                raise ProtocolError("mapping with empty id or phrase")
            mappings.append(mapping)
        return mappings
    except (ValueError, KeyError, TypeError) as exc:
        raise ProtocolError(f"malformed response frame: {exc}") from exc


def _boundary_ok(text: str, start: int, end: int) -> bool:
    if start > 0 and text[start - 1].isalnum():
        return False
    if end < len(text) and text[end].isalnum():
        return False
    return True


def find_occurrences(text: str, phrase: str) -> list[Span]:
    """Case-insensitive, token-boundary occurrences of ``phrase``."""
    needle = phrase.lower()
    width = len(phrase)
    spans = []
    if not needle:
        return spans
    for start in range(len(text) - width + 1):
        end = start + width
        if text[start:end].lower() != needle:
            continue
        if _boundary_ok(text, start, end):
            spans.append(Span(start, end))
    return spans


def enrich(mappings: list[ConceptMapping], text: str) -> list[EnrichedMapping]:
    """Attach prevalence counts and occurrence spans to each mapping.

    Mappings whose phrase never occurs in the text are dropped with a
    warning.
    """
    enriched = []
    for mapping in mappings:
        occurrences = find_occurrences(text, mapping.matched_phrase)
        if not occurrences:
            log.warning("dropping mapping %s: phrase %r not found in text",
                        mapping.concept_id, mapping.matched_phrase)
            continue
        enriched.append(EnrichedMapping(mapping, len(occurrences), tuple(occurrences)))
    return enriched


def annotate_mapper(text: str, endpoint: MapperEndpoint,
                    provenance=None) -> list[Annotation]:
    """One annotation per (mapping, occurrence) pair.

    The prevalence count travels in the concept payload's definition field
    as ``prevalence=N`` so the output schema stays unchanged.
    """
    mappings = request_mappings(text, endpoint)
    annotations = []
    for item in enrich(mappings, text):
        for span in item.occurrences:
            annotations.append(
                Annotation(
                    span=span,
                    surface=span.slice(text),
                    source=SourceKind.METAMAP,
                    concepts=(
                        ConceptRef(
                            id=item.mapping.concept_id,
                            label=item.mapping.preferred_name or None,
                            definition=f"prevalence={item.prevalence}",
                        ),
                    ),
                    provenance=provenance,
                )
            )
    return annotations
