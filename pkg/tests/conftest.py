import pytest


@pytest.fixture(autouse=True)
def _clean_catalog_env(monkeypatch):
    """Keep tests independent of any catalog extension in the environment."""
    monkeypatch.delenv("QCF_CATALOG", raising=False)
