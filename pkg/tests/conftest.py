import hypothesis
import pytest

from ncfkit.core import parse_anf, truth_table_from_anf

hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile("ci")

Y_ANF = "x1*x2*x3*x4*x5 + x1*x2*x3*x4 + x1*x2*x4*x5 + x1*x2*x4 + x1*x3*x4 + x1*x3 + x1*x4 + x1"
N_ANF = "x1*x2*x3 + x2*x3*x4 + x1*x3 + x3*x4 + 1"


@pytest.fixture
def Y():
    return truth_table_from_anf(parse_anf(Y_ANF, 5))


@pytest.fixture
def N():
    return truth_table_from_anf(parse_anf(N_ANF, 4))


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
