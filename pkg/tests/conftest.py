#!/usr/bin/env python
"""
Configuration file for pytest.
"""

import sys
from os.path import abspath, dirname

import pytest
from click.testing import CliRunner

PACKAGE_PATH = abspath(dirname(dirname(__file__)))
sys.path.insert(0, PACKAGE_PATH)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def working_dir(tmp_path, monkeypatch):
    """Keep persisted defaults and cached closures out of the real home directory."""
    from spart import config

    monkeypatch.setattr(config, "SPART_WORKING_DIR", str(tmp_path / "spart"))
    for key in config.DEFAULTS:
        monkeypatch.delenv(f"SPART_{key.upper()}", raising=False)
    return tmp_path / "spart"
