from pathlib import Path

import pytest

from ftskit.feature_logic import TRUE, parse_formula
from ftskit.modelfile import load_model
from ftskit.projection import project

from .oracles import MODELS


@pytest.fixture(scope="session")
def cruise():
    return load_model((MODELS / "cruise.iofts").read_text())


@pytest.fixture(scope="session")
def faulty_model():
    return load_model((MODELS / "faulty.iofts").read_text())


@pytest.fixture(scope="session")
def faulty(faulty_model):
    return project(faulty_model, TRUE)


@pytest.fixture(scope="session")
def l1(cruise):
    return cruise.product("l1")


@pytest.fixture(scope="session")
def l2(cruise):
    return cruise.product("l2")


@pytest.fixture(scope="session")
def basic(cruise):
    return project(cruise, parse_formula("cc & !cac", cruise.features))


@pytest.fixture(scope="session")
def spec_cc(cruise):
    return project(cruise, parse_formula("cc", cruise.features))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
