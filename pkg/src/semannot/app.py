"""Orchestration: run every enabled knowledge source over one document.

The text is tokenized once (and POS-tagged once when WordNet is enabled);
all annotators share that stream.  Sources run in a fixed order (SKOS,
WordNet, DBPedia, MetaMap) so output is deterministic, and the merged
document is sorted and deduplicated by the core model.
"""

from __future__ import annotations

import logging
from datetime import datetime
from typing import Callable

from . import dbpedia, mapper, skos, wordnet
from .config import Settings
from .errors import NetworkError
from .model import AnnotatedDocument, SourceKind
from .pipeline import pos_tag, tokenize
from .provenance import build_provenance, utc_now

log = logging.getLogger(__name__)

EXECUTION_ORDER = (
    SourceKind.SKOS,
    SourceKind.WORDNET,
    SourceKind.DBPEDIA,
    SourceKind.METAMAP,
)


def _load_resources(settings: Settings):
    skos_index = None
    lexicon = None
    if SourceKind.SKOS in settings.sources:
        concepts = []
        for path in settings.skos_files:
            concepts.extend(skos.load_skos(path))
        skos_index = skos.build_index(concepts)
    if SourceKind.WORDNET in settings.sources:
        lexicon = wordnet.load_wndb(settings.wordnet_path)
    return skos_index, lexicon


def annotate_all(
    text: str,
    settings: Settings,
    clock: Callable[[], datetime] = utc_now,
) -> AnnotatedDocument:
    """Tokenize once, run every enabled annotator, merge the results.

    Network failures abort the run unless the failing source is marked
    optional, in which case the source is skipped with a warning.
    """
    skos_index, lexicon = _load_resources(settings)
    stream = tokenize(text)
    if lexicon is not None:
        stream = pos_tag(stream, lexicon)

    # One clock read per run; all sources share the timestamp.
    now = clock()

    def frozen():
        return now

    def record_for(kind: SourceKind):
        return build_provenance(
            agent_name=settings.agent_name,
            agent_version=settings.agent_version,
            environment_description=settings.environment_description,
            location=settings.location,
            system=kind,
            clock=frozen,
        )

    annotations = []
    for kind in EXECUTION_ORDER:
        if kind not in settings.sources:
            continue
        provenance = record_for(kind)
        if kind is SourceKind.SKOS:
            annotations.extend(skos.annotate_skos(text, stream, skos_index, provenance))
        elif kind is SourceKind.WORDNET:
            stopwords = None if settings.wordnet_stopwords else frozenset()
            annotations.extend(
                wordnet.annotate_wordnet(text, stream, lexicon, stopwords, provenance)
            )
        elif kind is SourceKind.DBPEDIA:
            cfg = dbpedia.EndpointConfig(
                url=settings.dbpedia_endpoint,
                min_request_interval=settings.dbpedia_min_interval_ms / 1000.0,
                max_retries=settings.dbpedia_max_retries,
                language_tag=settings.dbpedia_lang,
            )
            try:
                annotations.extend(dbpedia.annotate_dbpedia(text, stream, cfg, provenance))
            except NetworkError as exc:
                if not settings.dbpedia_optional:
                    raise
                log.warning("skipping DBPedia source: %s", exc)
        elif kind is SourceKind.METAMAP:
            endpoint = mapper.MapperEndpoint(settings.metamap_host, settings.metamap_port)
            try:
                annotations.extend(mapper.annotate_mapper(text, endpoint, provenance))
            except NetworkError as exc:
                if not settings.metamap_optional:
                    raise
                log.warning("skipping MetaMap source: %s", exc)
    return AnnotatedDocument.build(text, annotations)
