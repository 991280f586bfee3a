from pathlib import Path

import pytest

from quizboard.bank import QuestionBank, parse_sheet_file

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_sheet_path() -> Path:
    return FIXTURES / "questions.csv"


@pytest.fixture(scope="session")
def fixture_assets_root() -> Path:
    return FIXTURES / "assets"


@pytest.fixture(scope="session")
def fixture_records(fixture_sheet_path):
    return parse_sheet_file(fixture_sheet_path)


@pytest.fixture(scope="session")
def en_bank(fixture_records) -> QuestionBank:
    return QuestionBank("en", [r for r in fixture_records if r.language == "en"])


@pytest.fixture(scope="session")
def es_bank(fixture_records) -> QuestionBank:
    return QuestionBank("es", [r for r in fixture_records if r.language == "es"])
