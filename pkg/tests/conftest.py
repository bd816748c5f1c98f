import pytest
from hypothesis import HealthCheck, settings

from floydtight import preset
from floydtight.quotient import Epimorphism

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def f2():
    return preset("f2")


@pytest.fixture(scope="session")
def z2():
    return preset("z2")


@pytest.fixture(scope="session")
def z2z3():
    return preset("z2z3")


@pytest.fixture(scope="session")
def f2_to_z2(f2, z2):
    return Epimorphism(f2, z2, {"a": "a", "A": "A", "b": "b", "B": "B"})


@pytest.fixture(scope="session")
def f2_to_z(f2):
    return Epimorphism(f2, preset("z"), {"a": "a", "A": "A", "b": "", "B": ""})
