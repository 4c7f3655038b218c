from datetime import datetime, timezone

import pytest

from semannot.app import annotate_all
from semannot.config import Settings
from semannot.errors import EndpointUnreachableError
from semannot.model import AnnotatedDocument, SourceKind, serialize_document
from semannot.pipeline import pos_tag, tokenize
from semannot.provenance import build_provenance
from semannot import dbpedia, mapper, skos, wordnet

FROZEN = datetime(2024, 5, 14, 12, 0, 0, tzinfo=timezone.utc)

TEXT = ("The patient with lung cancer was treated in Manchester. "
        "Doctors gave aspirin twice daily, and aspirin helped. "
        "The bank approved a loan for the clinic.")

DBP = "http://dbpedia.org/resource"

SPARQL_MAPPING = {
    "Manchester": [f"{DBP}/Manchester"],
    "Aspirin": [f"{DBP}/Aspirin"],
    "Lung cancer": [f"{DBP}/Lung_cancer"],
}

MAPPER_MAPPINGS = [
    {"id": "C0004057", "name": "Aspirin", "phrase": "aspirin", "score": 950},
    {"id": "C0242379", "name": "Malignant neoplasm of lung",
     "phrase": "lung cancer", "score": 861},
    {"id": "C9999999", "name": "Absent", "phrase": "zebra"},
]


def frozen_clock():
    return FROZEN


def base_settings(data_dir, **overrides):
    values = dict(
        sources=(SourceKind.SKOS, SourceKind.WORDNET),
        skos_files=(data_dir / "skos" / "cancer.txt",),
        wordnet_path=data_dir / "wndb",
        agent_name="ClinicalThesaurus",
        agent_version="1.0",
        environment_description="test-vm",
        location="Manchester",
        dbpedia_min_interval_ms=0,
        dbpedia_max_retries=1,
    )
    values.update(overrides)
    return Settings(**values)


def record_for(settings, kind):
    return build_provenance(
        agent_name=settings.agent_name,
        agent_version=settings.agent_version,
        environment_description=settings.environment_description,
        location=settings.location,
        system=kind,
        clock=frozen_clock,
    )


@pytest.fixture()
def all_source_settings(data_dir, sparql_server, mapper_server):
    sparql_server.mapping.update(SPARQL_MAPPING)
    mapper_server.mappings = list(MAPPER_MAPPINGS)
    return base_settings(
        data_dir,
        sources=(SourceKind.SKOS, SourceKind.WORDNET,
                 SourceKind.DBPEDIA, SourceKind.METAMAP),
        dbpedia_endpoint=sparql_server.url,
        metamap_host=mapper_server.host,
        metamap_port=mapper_server.port,
    )


def expected_union(settings, text):
    """Per-module outputs composed exactly as the orchestrator promises."""
    lexicon = wordnet.load_wndb(settings.wordnet_path)
    concepts = []
    for path in settings.skos_files:
        concepts.extend(skos.load_skos(path))
    index = skos.build_index(concepts)
    stream = pos_tag(tokenize(text), lexicon)
    anns = []
    if SourceKind.SKOS in settings.sources:
        anns += skos.annotate_skos(text, stream, index,
                                   record_for(settings, SourceKind.SKOS))
    if SourceKind.WORDNET in settings.sources:
        anns += wordnet.annotate_wordnet(text, stream, lexicon, None,
                                         record_for(settings, SourceKind.WORDNET))
    if SourceKind.DBPEDIA in settings.sources:
        cfg = dbpedia.EndpointConfig(
            url=settings.dbpedia_endpoint, min_request_interval=0.0,
            max_retries=settings.dbpedia_max_retries)
        anns += dbpedia.annotate_dbpedia(text, stream, cfg,
                                         record_for(settings, SourceKind.DBPEDIA))
    if SourceKind.METAMAP in settings.sources:
        ep = mapper.MapperEndpoint(settings.metamap_host, settings.metamap_port)
        anns += mapper.annotate_mapper(text, ep,
                                       record_for(settings, SourceKind.METAMAP))
    return AnnotatedDocument.build(text, anns)


class TestAnnotateAll:
    def test_empty_input_gives_empty_document(self, data_dir):
        doc = annotate_all("", base_settings(data_dir), clock=frozen_clock)
        assert doc.text == "" and doc.annotations == ()

    def test_skos_only_equals_module_output(self, data_dir):
        settings = base_settings(data_dir, sources=(SourceKind.SKOS,))
        doc = annotate_all(TEXT, settings, clock=frozen_clock)
        concepts = skos.load_skos(settings.skos_files[0])
        expected = skos.annotate_skos(
            TEXT, tokenize(TEXT), skos.build_index(concepts),
            record_for(settings, SourceKind.SKOS))
        assert doc == AnnotatedDocument.build(TEXT, expected)
        assert all(a.source is SourceKind.SKOS for a in doc.annotations)

    def test_all_sources_equal_sorted_union(self, all_source_settings):
        doc = annotate_all(TEXT, all_source_settings, clock=frozen_clock)
        assert doc == expected_union(all_source_settings, TEXT)
        present = {a.source for a in doc.annotations}
        assert present == set(SourceKind)

    def test_disabling_a_source_removes_exactly_its_annotations(
            self, all_source_settings):
        full = annotate_all(TEXT, all_source_settings, clock=frozen_clock)
        reduced_settings = all_source_settings.with_sources(
            (SourceKind.SKOS, SourceKind.WORDNET, SourceKind.DBPEDIA))
        reduced = annotate_all(TEXT, reduced_settings, clock=frozen_clock)
        kept = tuple(a for a in full.annotations
                     if a.source is not SourceKind.METAMAP)
        assert reduced.annotations == kept

    def test_two_runs_byte_identical_under_frozen_clock(self, all_source_settings):
        first = serialize_document(
            annotate_all(TEXT, all_source_settings, clock=frozen_clock))
        second = serialize_document(
            annotate_all(TEXT, all_source_settings, clock=frozen_clock))
        assert first == second

    def test_unreachable_metamap_fails_unless_optional(self, data_dir):
        settings = base_settings(
            data_dir,
            sources=(SourceKind.METAMAP,),
            metamap_host="127.0.0.1",
            metamap_port=9,
        )
        with pytest.raises(EndpointUnreachableError):
            annotate_all("some text", settings, clock=frozen_clock)
        optional = base_settings(
            data_dir,
            sources=(SourceKind.SKOS, SourceKind.METAMAP),
            metamap_host="127.0.0.1",
            metamap_port=9,
            metamap_optional=True,
        )
        doc = annotate_all(TEXT, optional, clock=frozen_clock)
        assert all(a.source is SourceKind.SKOS for a in doc.annotations)

    def test_stopword_toggle_changes_scores(self, data_dir):
        # With the stoplist off, "a" and "loan" from the financial gloss
        # both count: 2/10 instead of 1/7.
        text = "The bank approved a loan for the clinic."
        on = annotate_all(
            text, base_settings(data_dir, sources=(SourceKind.WORDNET,)),
            clock=frozen_clock)
        off = annotate_all(
            text, base_settings(data_dir, sources=(SourceKind.WORDNET,),
                                wordnet_stopwords=False),
            clock=frozen_clock)
        score_on = [a.score for a in on.annotations if a.surface == "bank"][0]
        score_off = [a.score for a in off.annotations if a.surface == "bank"][0]
        assert score_on == pytest.approx(1 / 7)
        assert score_off == pytest.approx(2 / 10)

    def test_unreachable_dbpedia_optional_skips(self, data_dir):
        settings = base_settings(
            data_dir,
            sources=(SourceKind.SKOS, SourceKind.DBPEDIA),
            dbpedia_endpoint="http://127.0.0.1:9/sparql",
            dbpedia_optional=True,
        )
        doc = annotate_all(TEXT, settings, clock=frozen_clock)
        assert all(a.source is SourceKind.SKOS for a in doc.annotations)
