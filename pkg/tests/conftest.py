import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import pytest

from twogauge import groups, complexes


@pytest.fixture(scope="session")
def tg_z2():
    return groups.two_group_z2()


@pytest.fixture(scope="session")
def tg_bz2():
    return groups.two_group_bz2()


@pytest.fixture(scope="session")
def tg_z2z2():
    return groups.two_group_z2z2(False)


@pytest.fixture(scope="session")
def tg_z2z2_alpha():
    return groups.two_group_z2z2(True)


@pytest.fixture(scope="session")
def sphere2():
    return complexes.boundary_simplex(2)


@pytest.fixture(scope="session")
def sphere3():
    return complexes.boundary_simplex(3)


@pytest.fixture(scope="session")
def sphere4():
    return complexes.boundary_simplex(4)
