import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import pgx.pg as pgmod
from pgx.ontology import load_ontology


@pytest.fixture(scope="session")
def fixture_pg_text() -> str:
    return resources.files("pgx.data").joinpath("auditorium.pg.json").read_text()


@pytest.fixture(scope="session")
def fixture_pg(fixture_pg_text) -> pgmod.ParseGraph:
    return pgmod.load(fixture_pg_text)


@pytest.fixture(scope="session")
def fixture_onto_text() -> str:
    return resources.files("pgx.data").joinpath("common_sense.onto").read_text()


@pytest.fixture(scope="session")
def fixture_onto(fixture_onto_text):
    return load_ontology(fixture_onto_text)


@pytest.fixture()
def verdict(capsys):
    """Checked verdict line that shows up even under output capture."""

    def _verdict(criterion: int, ok: bool, detail: str) -> None:
        line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}"
        with capsys.disabled():
            print(line, flush=True)
        assert ok, line

    return _verdict
