"""DBpedia annotation over a SPARQL HTTP endpoint.

N-grams from the text are normalized the way DBpedia labels are written
(first letter capital, rest lowercase) and each distinct label is looked up
once per document via an exact rdfs:label match.  Public endpoints throttle
aggressively, so requests are paced per endpoint and 503 responses are
retried with exponential backoff.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

import requests

from .errors import (
    NetworkError,
    NormalizationError,
    ProtocolError,
    ThrottledEndpointError,
    TransportError,
)
from .model import Annotation, ConceptRef, SourceKind
from .pipeline import NGram, TokenStream, ngrams

DEFAULT_ENDPOINT = "http://dbpedia.org/sparql"

_QUERY_TEMPLATE = (
    'SELECT DISTINCT ?s WHERE {{ ?s '
    '<http://www.w3.org/2000/01/rdf-schema#label> "{label}"@{lang} }} LIMIT 10'
)

_RESULTS_MEDIA_TYPE = "application/sparql-results+json"


@dataclass(frozen=True)
class EndpointConfig:
    url: str = DEFAULT_ENDPOINT
    min_request_interval: float = 1.0
    max_retries: int = 3
    backoff_base: float = 0.5
    language_tag: str = "en"
    timeout: float = 30.0

    def __post_init__(self):
        if self.min_request_interval < 0:
            raise ValueError("min_request_interval must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class LabelQuery:
    """A normalized query label together with the n-gram it came from."""

    normalized: str
    source_ngram: NGram


@dataclass(frozen=True)
class SparqlResult:
    resource_uri: str
    matched_label: str = ""


class _EndpointPacer:
    """Serializes requests to one endpoint and enforces the minimum gap."""

    def __init__(self):
        self.lock = threading.Lock()
        self.last_request = None

    def pace(self, interval: float) -> None:
        if self.last_request is not None:
            wait = self.last_request + interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)

    def mark(self) -> None:
        self.last_request = time.monotonic()


_pacers: dict[str, _EndpointPacer] = {}
_pacers_lock = threading.Lock()


def _pacer_for(url: str) -> _EndpointPacer:
    with _pacers_lock:
        return _pacers.setdefault(url, _EndpointPacer())


def normalize_label(surface: str) -> str:
    """First letter capital, everything else lowercase, whitespace collapsed.

    Idempotent; empty or whitespace-only input is rejected.
    """
    collapsed = " ".join(surface.split())
    if not collapsed:
        raise NormalizationError("cannot normalize an empty label")
    return collapsed.capitalize()


def escape_literal(label: str) -> str:
    """Escape a string for embedding in a SPARQL quoted literal."""
    return (
        label.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def build_query(label: str, cfg: EndpointConfig) -> str:
    """Exact rdfs:label lookup for a normalized label."""
    return _QUERY_TEMPLATE.format(label=escape_literal(label), lang=cfg.language_tag)


def _parse_bindings(body: dict, label: str) -> list[SparqlResult]:
    try:
        bindings = body["results"]["bindings"]
        results = []
        for binding in bindings:
            uri = binding["s"]["value"]
            if not uri:
                raise ProtocolError("binding with empty resource URI")
            results.append(SparqlResult(resource_uri=uri, matched_label=label))
        return results
    except (KeyError, TypeError) as exc:
        raise ProtocolError(f"malformed SPARQL results body: missing {exc}") from exc


def execute_query(query: str, cfg: EndpointConfig, label: str = "") -> list[SparqlResult]:
    """Run one SPARQL query, paced and 503-resilient.

    Consecutive requests to the same endpoint are at least
    ``min_request_interval`` seconds apart (globally, across documents and
    threads).  A 503 is retried up to ``max_retries`` times with backoff
    ``backoff_base * 2**attempt``; any other non-200 status or a connection
    failure is a transport error.
    """
    pacer = _pacer_for(cfg.url)
    with pacer.lock:
        for attempt in range(cfg.max_retries + 1):
            pacer.pace(cfg.min_request_interval)
            try:
                response = requests.get(
                    cfg.url,
                    params={"query": query},
                    headers={"Accept": _RESULTS_MEDIA_TYPE},
                    timeout=cfg.timeout,
                )
            except requests.RequestException as exc:
                pacer.mark()
                raise TransportError(f"request failed: {exc}") from exc
            pacer.mark()
            if response.status_code == 503:
                if attempt == cfg.max_retries:
                    raise ThrottledEndpointError(
                        f"endpoint still throttling after {attempt + 1} attempts",
                        attempts=attempt + 1,
                    )
                time.sleep(cfg.backoff_base * (2 ** attempt))
                continue
            if response.status_code != 200:
                raise TransportError(
                    f"unexpected HTTP status {response.status_code}",
                    status=response.status_code,
                )
            try:
                body = response.json()
            except ValueError as exc:
                raise ProtocolError("response body is not JSON") from exc
            return _parse_bindings(body, label)
    raise AssertionError("unreachable")


def lookup_label(label: str, cfg: EndpointConfig) -> list[SparqlResult]:
    return execute_query(build_query(label, cfg), cfg, label=label)


def annotate_dbpedia(text: str, stream: TokenStream, cfg: EndpointConfig,
                     provenance=None) -> list[Annotation]:
    """Annotate every n-gram whose normalized label matches a resource.

    Each distinct normalized label is queried exactly once per document;
    every occurrence of a matching n-gram gets one annotation per returned
    resource.  Overlapping hits are all kept.
    """
    queries = [LabelQuery(normalize_label(g.surface), g) for g in ngrams(stream)]
    cache: dict[str, list[SparqlResult]] = {}
    annotations = []
    for query in queries:
        if query.normalized not in cache:
            try:
                cache[query.normalized] = lookup_label(query.normalized, cfg)
            except NetworkError as exc:
                exc.label = query.normalized
                raise
        gram = query.source_ngram
        for result in cache[query.normalized]:
            annotations.append(
                Annotation(
                    span=gram.span,
                    surface=gram.surface,
                    source=SourceKind.DBPEDIA,
                    concepts=(
                        ConceptRef(id=result.resource_uri, label=result.matched_label),
                    ),
                    provenance=provenance,
                )
            )
    return annotations
