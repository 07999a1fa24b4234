import os
import sys
import json
import tempfile
import shutil
import pytest

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running oracle grids")


@pytest.fixture(scope="session")
def temp_dir():
    d = tempfile.mkdtemp()
    yield d
    shutil.rmtree(d, ignore_errors=True)


@pytest.fixture
def clean_env(monkeypatch):
    """Drop every CASIMIR_* override so settings fall back to their defaults."""
    for name in list(os.environ):
        if name.startswith("CASIMIR_"):
            monkeypatch.delenv(name, raising=False)
    yield monkeypatch


@pytest.fixture
def write_config(temp_dir):
    """Write a run configuration document and return its path."""
    def _write(doc, name="run.json"):
        path = os.path.join(temp_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            if isinstance(doc, str):
                fh.write(doc)
            else:
                json.dump(doc, fh)
        return path
    return _write


@pytest.fixture
def constant_config():
    def _make(epsilon=2.0, **extra):
        doc = {
            "schema_version": 1,
            "atom": {"k0": 1.0, "alpha0": 1.0},
            "model": {"kind": "constant", "epsilon": epsilon},
            "units": "reduced",
        }
        doc.update(extra)
        return doc
    return _make
