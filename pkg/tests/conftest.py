import os

import pytest
from hypothesis import settings

# property suites run a fixed example sequence unless SKEINTRACE_SEED is set
SEED = os.environ.get("SKEINTRACE_SEED")
settings.register_profile("fixed", deadline=None, derandomize=True)
settings.register_profile("seeded", deadline=None, derandomize=False)
settings.load_profile("seeded" if SEED else "fixed")


@pytest.hookimpl(tryfirst=True)
def pytest_configure(config):
    if SEED and config.getoption("hypothesis_seed", None) is None:
        config.option.hypothesis_seed = SEED


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, what = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {what}")
