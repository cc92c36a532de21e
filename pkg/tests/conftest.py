"""
PyTest configuration and fixtures.
"""
import logging
import random

import pytest

from config.settings import AXIOMS, CONCORDANCE_FILE, CORPUS_FILES, DATA_DIR
from core.analysis import Concordance
from notations.corpus_file import load_corpus
from notations.tptp_problem import load_problem
from utils.axiom_factory import AxiomFactory
from utils.helpers import get_current_timestamp

logger = logging.getLogger(__name__)


def pytest_addoption(parser):
    """Add custom command-line options for pytest."""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run minutes-scale enumerations marked slow"
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --run-slow is given."""
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def luk():
    """Assignment of Łukasiewicz's single axiom to label 1."""
    return AxiomFactory.get_assignment("Łukasiewicz")


@pytest.fixture(scope="session")
def syll_simp():
    """Assignment of the Syll-Simp axiom CCCpqrCqr to label 1."""
    return AxiomFactory.get_assignment("Syll-Simp")


@pytest.fixture(scope="session")
def named_axioms():
    """Shared assignments of all named axioms, keyed by name."""
    return {name: AxiomFactory.get_assignment(name) for name in AXIOMS}


@pytest.fixture(scope="session")
def mer_corpus():
    """Meredith's proof of Syll, Peirce and Simp."""
    return load_corpus(CORPUS_FILES["mer"])


@pytest.fixture(scope="session")
def luk_corpus():
    """Łukasiewicz's proof, converted and n-simplified."""
    return load_corpus(CORPUS_FILES["luk"])


@pytest.fixture(scope="session")
def d29_corpus():
    """The machine-found proof with a 22-step Syll subproof."""
    return load_corpus(CORPUS_FILES["d29"])


@pytest.fixture(scope="session")
def concordance():
    return Concordance.load(CONCORDANCE_FILE)


@pytest.fixture(scope="session")
def lcl038():
    """Syll from Łukasiewicz as a TPTP problem."""
    return load_problem(DATA_DIR / "lcl038-1.p")


@pytest.fixture(scope="session")
def problems():
    """All shipped TPTP problems, keyed by file stem."""
    return {path.stem: load_problem(path) for path in sorted(DATA_DIR.glob("*.p"))}


@pytest.fixture(scope="function")
def rng():
    """Seeded random source for property checks."""
    return random.Random(20240229)


@pytest.fixture(scope="function", autouse=True)
def log_on_failure(request):
    """
    Log the name and time of a failing test.

    Args:
        request: PyTest request object
    """
    yield

    report = getattr(request.node, "rep_call", None)
    if report is not None and report.failed:
        logger.error("failed: %s at %s", request.node.nodeid, get_current_timestamp())


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """
    Hook to make test results available to fixtures.

    This allows the log_on_failure fixture to check if a test failed.
    """
    # Execute all other hooks to obtain the report object
    outcome = yield
    rep = outcome.get_result()

    # Set a report attribute for each phase of a call
    setattr(item, f"rep_{rep.when}", rep)

