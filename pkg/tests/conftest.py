import json
from pathlib import Path

import pytest

from sway.assistant import StubClient
from sway.session import SessionStore
from sway.svg_model import EncodingManifest, parse_document

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def flowers_svg() -> str:
    return (FIXTURES / "flower_chart.svg").read_text()


@pytest.fixture()
def flowers_doc(flowers_svg):
    return parse_document(flowers_svg)


@pytest.fixture(scope="session")
def flower_manifest() -> EncodingManifest:
    data = json.loads((FIXTURES / "flower_manifest.json").read_text())
    return EncodingManifest.from_json(data)


@pytest.fixture()
def store(tmp_path):
    return SessionStore(tmp_path / "sessions", client=StubClient())


GROW_PROMPT = "Please make the flowers grow up"
BRIGHTEN_PROMPT = (
    "Now create a looped animation slowly brightening the petals and darkening them."
)


@pytest.fixture(scope="session")
def grow_prompt():
    return GROW_PROMPT


@pytest.fixture(scope="session")
def brighten_prompt():
    return BRIGHTEN_PROMPT
