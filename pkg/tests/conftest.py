import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import nc_presentation, sym2_presentation
from lfdspectrum.divisor import analyze_divisor


@pytest.fixture(scope="session")
def nc2():
    return analyze_divisor(nc_presentation(2))


@pytest.fixture(scope="session")
def nc3():
    return analyze_divisor(nc_presentation(3))


@pytest.fixture(scope="session")
def nc4():
    return analyze_divisor(nc_presentation(4))


@pytest.fixture(scope="session")
def sym2():
    return analyze_divisor(sym2_presentation())


@pytest.fixture(scope="session")
def star3_divisor():
    from lfdspectrum.catalog import family

    return analyze_divisor(family("star:3"))


@pytest.fixture(scope="session")
def dynkin5_divisor():
    from lfdspectrum.catalog import family

    return analyze_divisor(family("dynkinD:5"))
