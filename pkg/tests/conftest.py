import json
import time
from pathlib import Path

import pytest

from kdvactions.corpus import load_corpus
from kdvactions.hill import periodic_spectrum
from kdvactions.potential import Potential
from kdvactions.verify import analyze

ORACLES = json.loads((Path(__file__).parent / "oracles" / "values.json").read_text())

# lines printed by the acceptance tests, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


@pytest.fixture(scope="session")
def mathieu():
    return Potential({1: (0.2, 0.0)})


@pytest.fixture(scope="session")
def mixed():
    return Potential({1: (2.0, 0.0), 2: (0.0, 0.5)})


@pytest.fixture(scope="session")
def mathieu_spec(mathieu):
    return periodic_spectrum(mathieu, 40)


@pytest.fixture(scope="session")
def mixed_spec(mixed):
    return periodic_spectrum(mixed, 40)


@pytest.fixture(scope="session")
def corpus_members():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_analyses(corpus_members):
    """Spectrum, actions on levels 0..5 and Hamiltonians per corpus member, with wall time."""
    start = time.perf_counter()
    out = {m.name: analyze(m.potential) for m in corpus_members}
    return out, time.perf_counter() - start
