import numpy as np
import pytest
from scipy.optimize import minimize

from geocoh.ensembles import PureEnsemble
from geocoh.linalg import fidelity


def theta_pair(theta, priors=(0.5, 0.5)):
    return PureEnsemble(priors, [[np.cos(theta), np.sin(theta)],
                                 [np.cos(theta), -np.sin(theta)]])


def fidelity_oracle(rho, starts=6, seed=0):
    """max_sigma F(rho, sigma) over diagonal sigma by direct Nelder-Mead.

    Shares nothing with the package solvers except the fidelity kernel.
    """
    d = rho.shape[0]
    rng = np.random.default_rng(seed)

    def neg(x):
        w = np.exp(x - x.max())
        return -fidelity(rho, np.diag(w / w.sum()))

    best = -np.inf
    for k in range(starts):
        x0 = np.log(np.real(np.diag(rho)).clip(1e-9)) if k == 0 else rng.normal(size=d)
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-14, "maxiter": 20000})
        best = max(best, -res.fun)
    return best


def gso_error_three(rho):
    """Closed-form Gram-Schmidt error for a 3x3 QSD-state whose diagonal is
    already sorted in descending order."""
    x1, x2 = rho[0, 0].real, rho[1, 1].real
    r12, r13, r32, r31 = rho[0, 1], rho[0, 2], rho[2, 1], rho[2, 0]
    return (abs(r12) ** 2 / x1 + abs(r13) ** 2 / x1
            + abs(x1 * r32 - r31 * r12) ** 2 / (x1 * (x1 * x2 - abs(r12) ** 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
