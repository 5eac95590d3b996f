import os
import random

import numpy as np
import pytest

SEED = int(os.environ.get("GARBLECOST_SEED", "1729"))

# criterion number -> list of (check name, passed, detail)
ACCEPTANCE = {}


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def nprng():
    return np.random.default_rng(SEED)


def pytest_runtest_makereport(item, call):
    if call.when != "call":
        return
    num = item.get_closest_marker("criterion")
    if num is None:
        return
    detail = getattr(item.function, "detail", "")
    ACCEPTANCE.setdefault(num.args[0], []).append((item.name, call.excinfo is None, detail))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[num]
        ok = all(passed for _, passed, _ in checks)
        failed = [name for name, passed, _ in checks if not passed]
        extra = f" (failed: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}{extra}")
