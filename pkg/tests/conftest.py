import random

import pytest

from vortsym import vortmodel as vm

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def p2():
    return vm.build_algebra(vm.TruncationSpec.polynomial(2))


@pytest.fixture(scope="session")
def e01():
    return vm.build_algebra(vm.TruncationSpec.exponential([0, 1]))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
