import pytest

from sqorient.services.corpus import builtin
from sqorient.services.steenrod import complete_table


@pytest.fixture(scope="session")
def evi():
    return builtin("EVI")


@pytest.fixture(scope="session")
def evi_table(evi):
    return complete_table(evi)


@pytest.fixture(scope="session")
def eiii():
    return builtin("EIII")


@pytest.fixture(scope="session")
def eiii_mod2():
    return builtin("EIII-mod2")


@pytest.fixture(scope="session")
def cp2():
    return builtin("CP2")


@pytest.fixture(scope="session")
def rp2():
    return builtin("RP2")
