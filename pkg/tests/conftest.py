import pytest

from newton_filtrations.newton import Diagram
from newton_filtrations.poly import parse_polynomial

GOLDEN = "x^9+x^4*y^2+x^2*y^4+y^7+z^7"
TRIANGLE = "x^4+y^6+z^4+x*y*z"
CUSP = "x^2+y^3+z^7"
# facets 0 and 2 are disjoint, so the diagram is not bi-stellar
CHAIN = "x^12+x^6*z^2+x^5*y+x^2*z^5+y^7+z^9"


@pytest.fixture(scope="session")
def golden():
    return Diagram(parse_polynomial(GOLDEN))


@pytest.fixture(scope="session")
def triangle():
    return Diagram(parse_polynomial(TRIANGLE))


@pytest.fixture(scope="session")
def cusp():
    return Diagram(parse_polynomial(CUSP))


ACCEPTANCE: dict[int, tuple[bool, float, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, secs, limit, note = ACCEPTANCE[n]
        terminalreporter.write_line(
            f"criterion {n}: {'PASS' if ok else 'FAIL'} in {secs:.2f}s (limit {limit:.0f}s) {note}")
