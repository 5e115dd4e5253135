import pathlib

import pytest

from smsl import parse_smsl

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

HANOI = CORPUS / "hanoi_tower.smsl"
REGISTRATION = CORPUS / "image_registration.smsl"
HIERARCHICAL = CORPUS / "hierarchical.smsl"


@pytest.fixture(scope="session")
def hanoi_text() -> str:
    return HANOI.read_text()


@pytest.fixture(scope="session")
def registration_text() -> str:
    return REGISTRATION.read_text()


@pytest.fixture(scope="session")
def hierarchical_text() -> str:
    return HIERARCHICAL.read_text()


@pytest.fixture()
def hanoi_doc(hanoi_text):
    return parse_smsl(hanoi_text)


@pytest.fixture()
def registration_doc(registration_text):
    return parse_smsl(registration_text)


@pytest.fixture()
def hierarchical_doc(hierarchical_text):
    return parse_smsl(hierarchical_text)
