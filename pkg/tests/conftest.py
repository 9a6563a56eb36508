import pytest

from phasebal.fuzzy import default_controller
from phasebal.io import load_reference_feeder


@pytest.fixture(scope="session")
def controller():
    return default_controller()


@pytest.fixture()
def reference_feeder():
    return load_reference_feeder()


# (initial loads, fuzzy suggestion, error vector, corrected suggestion)
# Five historical application fixtures for the correction stage. The
# second row's suggestion is reconstructed as corrected + error, the only
# vector consistent with its error and corrected columns.
CORRECTION_FIXTURES = [
    ((157, 134, 120), (-12, 5, 25), (6, 6, 6), (-18, -1, 19)),
    ((140, 145, 156), (-1, -6, -12), (-6, -6, -7), (5, 0, -5)),
    ((205, 170, 162), (-52, -21, -12), (-28, -28, -29), (-24, 7, 17)),
    ((170, 95, 83), (-21, 60, 64), (34, 34, 35), (-55, 26, 29)),
    ((117, 74, 42), (25, 76, 108), (70, 70, 69), (-45, 6, 39)),
]


@pytest.fixture(scope="session")
def correction_fixtures():
    return CORRECTION_FIXTURES
