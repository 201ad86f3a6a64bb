import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from simbias.maps import BernoulliSpec, fst_random  # noqa: E402
from simbias.sampling import enumerate_distribution  # noqa: E402

# seeded FST used throughout; 5 states, 16-bit inputs, every input enumerated
FST_SEED = 0


@pytest.fixture(scope="session")
def fst_dist():
    return enumerate_distribution(fst_random(5, 16, FST_SEED))


@pytest.fixture(scope="session")
def uniform_dist():
    return enumerate_distribution(BernoulliSpec(8, 0.5))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
