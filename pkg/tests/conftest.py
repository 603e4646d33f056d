import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from covsys.core import CongruenceSystem  # noqa: E402

LCM24_COVER = "0/2,0/3,1/4,3/8,7/12,23/24"
FIVE_COVER = "0/2,0/3,1/4,1/6,11/12"
MIN3_COVER = "0/3,0/4,1/6,5/8,2/9,2/12,6/16,17/18,10/24,23/36,46/48,41/72"
MIN3_ELEVEN = "2/3,0/4,1/6,2/8,0/9,3/12,6/16,3/18,6/24,33/36,46/48"


@pytest.fixture
def lcm24_cover():
    return CongruenceSystem.parse(LCM24_COVER)


@pytest.fixture
def five_cover():
    return CongruenceSystem.parse(FIVE_COVER)


@pytest.fixture
def min3_cover():
    return CongruenceSystem.parse(MIN3_COVER)


@pytest.fixture
def min3_eleven():
    return CongruenceSystem.parse(MIN3_ELEVEN)


@pytest.fixture(scope="session")
def classified_small():
    """Every affine class of C_k for k <= 8 as ClassificationRecords."""
    from covsys.search import classify

    return classify(1, 8, 2)


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda text: int(text.split()[1])):
            terminalreporter.write_line(line)
