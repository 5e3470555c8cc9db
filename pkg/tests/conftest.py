import numpy as np
import pytest

from projpairs.region import construction_constants

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _acceptance.append((mark.args[0], mark.args[1], rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok in sorted(_acceptance):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title}")


@pytest.fixture
def rng():
    return np.random.default_rng(20260917)


def random_unitary(rng, k, complex_=True):
    z = rng.normal(size=(k, k))
    if complex_:
        z = z + 1j * rng.normal(size=(k, k))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def kronecker_points(count, offset=0):
    """Quasi-random points of [0,1)^2 (additive recurrence with the plastic number)."""
    g = 1.32471795724474602596
    alpha = np.array([1 / g, 1 / g**2])
    idx = np.arange(offset + 1, offset + count + 1)[:, None]
    return (0.5 + idx * alpha) % 1.0


def region_points(count, offset=0):
    """Map quasi-random unit-square points onto A via s in [0,1], d in [-sqrt s, sqrt s]."""
    uv = kronecker_points(count, offset)
    s = uv[:, 0]
    d = (2 * uv[:, 1] - 1) * np.sqrt(s)
    return np.column_stack([(s + d) / 2, (s - d) / 2])


def boundary_points(count):
    """Points of the two boundary pieces of A: the parabola and the segment x + y = 1."""
    half = count // 2
    d = np.linspace(-1, 1, half)
    parab = np.column_stack([(d * d + d) / 2, (d * d - d) / 2])
    d2 = np.linspace(-1, 1, count - half)
    seg = np.column_stack([(1 + d2) / 2, (1 - d2) / 2])
    return np.vstack([parab, seg])


def random_spectrum(rng, n, size=None, extra=()):
    """Distinct eigenvalues inside the sufficient range for even n."""
    lo = -((n - 4) ** 2) / (8 * n)
    hi = n - 2.0
    _, b = construction_constants(n // 2)
    size = size or int(rng.integers(1, 7))
    pool = list(rng.uniform(lo, hi, size=size)) + list(extra)
    if rng.random() < 0.3:
        pool.append(float(2 * b))
    return sorted(set(float(v) for v in pool))
