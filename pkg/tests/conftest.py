import numpy as np
import pytest
from scipy.linalg import expm

OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n):
    return np.kron(np.eye(n), OMEGA1)


def random_symplectic(n, rng, scale=0.5):
    """exp(Omega H) with H symmetric; independent of the package's generators."""
    h = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return expm(omega(n) @ (h + h.T) / 2)


def random_orthosymplectic(n, rng):
    a = rng.normal(size=(n, n))
    b = rng.normal(size=(n, n))
    # H commuting with Omega in blocked form -> passive transformation
    h = np.block([[a + a.T, b - b.T], [-(b - b.T), a + a.T]]) / 2
    perm = np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])
    inv = np.argsort(perm)
    h = h[np.ix_(inv, inv)]
    return expm(omega(n) @ h)


def random_local(n, rng, scale=0.5):
    out = np.zeros((2 * n, 2 * n))
    for j in range(n):
        out[2 * j:2 * j + 2, 2 * j:2 * j + 2] = random_symplectic(1, rng, scale)
    return out


def random_mixed_cm(n, rng, nu_max=3.0, scale=0.5):
    nu = rng.uniform(1.0, nu_max, n)
    s = random_symplectic(n, rng, scale)
    sigma = s.T @ np.diag(np.repeat(nu, 2)) @ s
    return 0.5 * (sigma + sigma.T), np.sort(nu)[::-1]


def random_pure_cm(n, rng, scale=0.5):
    s = random_symplectic(n, rng, scale)
    sigma = s.T @ s
    return 0.5 * (sigma + sigma.T)


def oracle_symplectic_eigenvalues(sigma):
    n = sigma.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * omega(n) @ sigma))
    return np.sort(ev)[::-1][::2]


def inf_norm(a):
    return float(np.abs(a).sum(axis=1).max())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
