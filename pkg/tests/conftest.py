import numpy as np
import pytest

from finitekey.quantum import AmplitudeDamping, Depolarizing, choi_of


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[Depolarizing(0.1), AmplitudeDamping(0.1)], ids=["dep", "ad"])
def benchmark_channel(request):
    return request.param


def random_distribution(rng, d, zeros=False):
    p = rng.dirichlet(np.full(d, 0.7))
    if zeros and d > 2:
        p[rng.integers(d)] = 0.0
        p /= p.sum()
    return p


def random_choi(rng, rank=4):
    """Random real Choi matrix: a random channel built from real Kraus operators."""
    ks = rng.normal(size=(rank, 2, 2))
    s = sum(k.T @ k for k in ks)
    w, v = np.linalg.eigh(s)
    inv_sqrt = (v / np.sqrt(w)) @ v.T
    ks = [k @ inv_sqrt for k in ks]
    bell = np.array([1.0, 0, 0, 1.0]) / np.sqrt(2)
    rho = sum(np.kron(np.eye(2), k) @ np.outer(bell, bell) @ np.kron(np.eye(2), k).T for k in ks)
    return 0.5 * (rho + rho.T)


@pytest.fixture
def dep01():
    return choi_of(Depolarizing(0.1))


@pytest.fixture
def ad01():
    return choi_of(AmplitudeDamping(0.1))


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
