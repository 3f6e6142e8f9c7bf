import pytest

from fsoirs import BeamParams, LensSpec, point_on_ellipse

D3, L_TR = 2000.0, 1600.0


@pytest.fixture(scope="session")
def apex():
    """Node at the top of the ellipse: d1 = d2 = 1 km, sin(theta) = 0.6."""
    return point_on_ellipse(0.0, D3, L_TR)


@pytest.fixture(scope="session")
def beam25():
    return BeamParams(1550e-9, 2.5e-3)


@pytest.fixture(scope="session")
def beam7():
    return BeamParams(1550e-9, 7e-3)


@pytest.fixture(scope="session")
def lens():
    return LensSpec(0.1)

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
