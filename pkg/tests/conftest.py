"""
tests/conftest.py
──────────────────
Fixtures partagées.
"""

import json
from pathlib import Path

import pytest

from src.data.loader import RuleBaseLoader
from tests.factories import build, job, resource, urgency_rule_base

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def rules_path() -> Path:
    return ROOT / "data/rules/default_rules.json"


@pytest.fixture(scope="session")
def rule_base(rules_path):
    """Base de règles livrée avec le projet."""
    return RuleBaseLoader(rules_path).load()


@pytest.fixture(scope="session")
def urgency_rules():
    return urgency_rule_base()


@pytest.fixture
def example_path() -> Path:
    return ROOT / "data/instances/example.json"


@pytest.fixture
def small_instance():
    """3 tâches nettes, 2 ressources."""
    return build(
        [
            job("J01", 12, (3, ["R1", "R2"]), (2, ["R2"])),
            job("J02", 9, (2, ["R1"]), (4, ["R1", "R2"])),
            job("J03", 15, (5, ["R2"])),
        ],
        [resource("R1"), resource("R2")],
    )


@pytest.fixture
def write_json(tmp_path):
    """Écrit un document JSON (ou du texte brut) dans tmp_path et retourne le chemin."""
    def _write(document, name="instance.json") -> Path:
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document, indent=2)
        path.write_text(text, encoding="utf-8")
        return path
    return _write
