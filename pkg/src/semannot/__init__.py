"""semannot: multi-source semantic text annotation with standoff output.

Four pluggable knowledge sources annotate a shared token stream: SKOS
thesauri, a WordNet-format lexical database with sense disambiguation, a
DBpedia SPARQL endpoint and an external concept-mapper service.  Every
annotation carries a seven-field provenance record.
"""

from .app import annotate_all
from .config import Settings, parse_settings
from .model import (
    AnnotatedDocument,
    Annotation,
    ConceptRef,
    SourceKind,
    Span,
    add_annotation,
    deserialize_document,
    serialize_document,
)
from .pipeline import POS, Token, TokenStream, context_window, ngrams, pos_tag, tokenize
from .provenance import ProvenanceRecord, build_provenance

__version__ = "0.1.0"

__all__ = [
    "AnnotatedDocument",
    "Annotation",
    "ConceptRef",
    "POS",
    "ProvenanceRecord",
    "Settings",
    "SourceKind",
    "Span",
    "Token",
    "TokenStream",
    "__version__",
    "add_annotation",
    "annotate_all",
    "build_provenance",
    "context_window",
    "deserialize_document",
    "ngrams",
    "parse_settings",
    "pos_tag",
    "serialize_document",
    "tokenize",
]
