import os

import hypothesis
import numpy as np
import pytest

import fsn_selector.param as param
from fsn_selector.graph import g7_leaders, g7_network

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def config_path(tmp_path, monkeypatch):
    """Never touch the user's real configuration file."""
    path = tmp_path / "config" / "config.toml"
    monkeypatch.setattr(param, "CONFIG_PATH", path)
    return path


@pytest.fixture
def g7():
    return g7_network()


@pytest.fixture
def g7_discrete():
    return g7_network().with_self_loops(1.0)


@pytest.fixture
def leaders_15():
    return g7_leaders()
