import os

import pytest

from config import reset_settings


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch, tmp_path):
    """Every test starts from default settings, isolated from any local .env"""
    for name in list(os.environ):
        if name.startswith("CQDIST_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    reset_settings()
    yield
    reset_settings()
