import pytest

from hmap.core import PolynomialMap

ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one acceptance line: ``acceptance(key, title, ok, detail)``."""

    def record(key, title, ok, detail=""):
        ACCEPTANCE[key] = (title, bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k)):
        title, ok, detail = ACCEPTANCE[key]
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def random_poly(rng, degree=None, scale=1.0, normalized=False):
    deg = int(rng.integers(1, 9)) if degree is None else degree
    a = scale * (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
    b = scale * (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
    b[0] = 0
    if normalized:
        a[0], a[1] = 0, 1
    return PolynomialMap(a, b)
