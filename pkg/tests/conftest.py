from __future__ import annotations

import warnings

import pytest

from hurwitztau.cover0 import Covering0
from hurwitztau.errors import CausticWarning
from hurwitztau.samples import builtin_example


@pytest.fixture(scope="session")
def a2() -> Covering0:
    return builtin_example("a2")


@pytest.fixture(scope="session")
def h12():
    return builtin_example("h12")


@pytest.fixture()
def quiet_caustic():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CausticWarning)
        yield
