import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from csbattery.model import ModelParams

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# filled in by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


energies = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def model_params(draw, n_b=None, max_nb=6, max_nc=12, min_m=0, coupled=True,
                 symmetric=False):
    nb = n_b if n_b is not None else draw(st.integers(1, max_nb))
    nc = draw(st.integers(max(1, min_m), max_nc))
    m = draw(st.integers(min_m, nc))
    B = draw(st.floats(0.1, 5))
    A = draw(st.floats(0.05, 3)) if coupled else draw(st.floats(0, 3))
    if symmetric:
        h, delta = B, 0.0
    else:
        h = draw(energies)
        delta = draw(st.floats(-1, 1))
    return ModelParams(B=B, h=h, A=A, delta=delta, n_b=nb, n_c=nc, m=m)


@pytest.fixture
def single_cell_case():
    return ModelParams(B=1, h=4, A=1, delta=0, n_b=1, n_c=20, m=20)


@pytest.fixture
def two_cell_case():
    return ModelParams(B=1, h=1, A=1, delta=0, n_b=2, n_c=200, m=100)


@pytest.fixture
def ten_cell_case():
    return ModelParams(B=1, h=1, A=1, delta=0, n_b=10, n_c=20, m=20)

settings.register_profile("stress", max_examples=2000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
