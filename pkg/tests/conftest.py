import json
from pathlib import Path

import pytest

from hxpath.model import load_model

REPO = Path(__file__).resolve().parent.parent
FIG1 = REPO / "examples" / "fig1.json"
if not FIG1.exists():
    FIG1 = REPO / "src" / "hxpath" / "data" / "fig1.json"
PROOFS = REPO / "proofs"

Q1 = "< @'a1/born/?(Value) = val @'a1/friends/born/?(Value) >"
Q2 = "!< @'a2/born/?(Value) = val @'a2/friends/born/?(Value) >"
Q3 = ("< @'a1/?(Name) = val @'a2/?(Name) > & "
      "< @'a1/born/?(Value) != val @'a2/born/?(Value) >")
FIG1_QUERIES = (Q1, Q2, Q3)


@pytest.fixture
def fig1():
    return load_model(FIG1)


def proof_json(name):
    return json.loads((PROOFS / (name + ".json")).read_text())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
