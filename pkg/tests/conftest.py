import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cmxtag.crf import available_backends  # noqa: E402
from cmxtag.synthetic import generate_synthetic_corpus  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def synth100():
    return generate_synthetic_corpus(42, 100, "hi", 0.3)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")
    config._acceptance_lines = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    number, title = mark.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    status = "PASS" if rep.passed else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title}"
    item.config._acceptance_lines.append(line + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda x: int(x.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
