import pytest

# (criterion number, title, passed, note) filled in by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, note in sorted(ACCEPTANCE):
        tag = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{tag}] {number:>2}. {title}" + (f"  ({note})" if note else ""))


@pytest.fixture
def rng():
    import random

    return random.Random(1234)
