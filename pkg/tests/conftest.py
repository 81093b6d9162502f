import pytest

from feyngraph.graphio import CORPUS, corpus_graph


@pytest.fixture(params=sorted(CORPUS))
def corpus_name(request):
    return request.param


@pytest.fixture
def bubble():
    return corpus_graph("bubble")


@pytest.fixture
def triangle():
    return corpus_graph("triangle")


@pytest.fixture
def wheel3():
    return corpus_graph("wheel3")


@pytest.fixture
def wheel4():
    return corpus_graph("wheel4")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(f"criterion {k:2d}: {RESULTS[k]}")
