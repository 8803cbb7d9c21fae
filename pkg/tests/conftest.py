import pytest
from hypothesis import HealthCheck, settings

from darboux.data import khan_penrose_data, polynomial_data, power_data
from darboux.goursat import SolutionField

settings.register_profile(
    "darboux",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("darboux")


@pytest.fixture(scope="session")
def kp_data():
    return khan_penrose_data()


@pytest.fixture(scope="session")
def kp_field(kp_data):
    return SolutionField(kp_data, eps_min=1e-9)


@pytest.fixture(scope="session")
def poly_data():
    # V_0 = x^2, V_1 = y^3
    return polynomial_data([0, 1], [0, 0, 1])


@pytest.fixture(scope="session")
def poly_field(poly_data):
    return SolutionField(poly_data, eps_min=1e-12)


@pytest.fixture(scope="session")
def lopsided_data():
    """Different sides, sqrt corner on both: exercises every asymmetric path."""
    return power_data(0.5, [1.0, 0.3], [0.0, -0.5, 1.0])


ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance outcome; the summary prints a line per criterion."""

    def record(label: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE.setdefault(label, []).append((bool(ok), detail))
        print(f"{label}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
        parts = ACCEPTANCE[label]
        ok = all(p for p, _ in parts)
        terminalreporter.write_line(f"{label}: {'PASS' if ok else 'FAIL'} | " + "; ".join(d for _, d in parts))
