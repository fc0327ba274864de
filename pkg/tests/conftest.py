"""Shared fixtures: the sample modules and parse helpers."""

from __future__ import annotations

from pathlib import Path

import pytest

from errbridge.idl import check_source
from errbridge.idl.validate import ValidatedModule

TESTS_DIR = Path(__file__).parent
FIXTURES_DIR = TESTS_DIR / "fixtures"
GOLDEN_DIR = TESTS_DIR / "golden"

DIVISION_FIXTURE = FIXTURES_DIR / "functions.eb"


def fixture_paths() -> list[Path]:
    return sorted(FIXTURES_DIR.glob("*.eb"))


def check_ok(source: str) -> ValidatedModule:
    """Parse and validate, failing the test on any diagnostic."""
    module, diagnostics = check_source(source)
    assert module is not None, [d.render("<test>") for d in diagnostics]
    assert diagnostics == []
    return module


def check_codes(source: str) -> list[str]:
    """Diagnostic codes produced for a source, in emission order."""
    _, diagnostics = check_source(source)
    return [d.code for d in diagnostics]


@pytest.fixture(scope="session")
def division_source() -> str:
    return DIVISION_FIXTURE.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def division_module(division_source: str) -> ValidatedModule:
    return check_ok(division_source)


@pytest.fixture(scope="session")
def fixture_modules() -> list[tuple[Path, ValidatedModule]]:
    return [(path, check_ok(path.read_text(encoding="utf-8"))) for path in fixture_paths()]
