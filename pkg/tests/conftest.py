from pathlib import Path

import pytest

from supplier_alloc.scenario import paper_scenario

ROOT = Path(__file__).resolve().parents[1]
PAPER_JSON = ROOT / "examples" / "paper.json"
BUNDLED_JSON = ROOT / "src" / "supplier_alloc" / "data" / "paper.json"


@pytest.fixture(scope="session")
def paper():
    return paper_scenario()


@pytest.fixture(scope="session")
def paper_json_path():
    return PAPER_JSON if PAPER_JSON.exists() else BUNDLED_JSON


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
