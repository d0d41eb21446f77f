import pytest

from rydcheb.params import builtin_params_path, load_params


@pytest.fixture(scope="session")
def rb():
    return load_params(builtin_params_path("Rb"))


@pytest.fixture(scope="session")
def cs():
    return load_params(builtin_params_path("Cs"))


@pytest.fixture(scope="session")
def hydrogen():
    return load_params(builtin_params_path("H"))
