import pytest

from pathlib import Path

from semannot.skos import build_index, load_skos
from semannot.wordnet import load_wndb

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def wndb_dir():
    return DATA_DIR / "wndb"


@pytest.fixture(scope="session")
def lexdb(wndb_dir):
    return load_wndb(wndb_dir)


@pytest.fixture(scope="session")
def cancer_concepts():
    return load_skos(DATA_DIR / "skos" / "cancer.txt")


@pytest.fixture(scope="session")
def cancer_index(cancer_concepts):
    return build_index(cancer_concepts)


@pytest.fixture()
def sparql_server():
    from semannot.testing import MockSparqlServer

    server = MockSparqlServer()
    server.start()
    yield server
    server.stop()


@pytest.fixture()
def mapper_server():
    from semannot.testing import MockMapperServer

    server = MockMapperServer()
    server.start()
    yield server
    server.stop()
