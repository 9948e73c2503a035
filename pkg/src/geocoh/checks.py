"""Reproduction checks: the package's acceptance criteria as runnable sweeps.

Each ``check_*`` function draws its own seeded samples and returns a
:class:`CheckResult`. :func:`run_all` runs them in order; the ``reproduce``
CLI subcommand and the acceptance tests are thin wrappers around it.
"""
import time
from dataclasses import dataclass, field

import numpy as np

from . import sampling
from .coherence import (c_l1, geometric_coherence, qubit_coherence,
                        solver_measurement_space, solver_state_space,
                        duality_check)
from .discrimination import (SearchConfig, bruteforce_vn_d2, gso_error,
                             helstrom_two, optimal_vn_search)
from .ensembles import (PureEnsemble, align_unitary, induced_ensemble,
                        multicopy_qsd_state, qsd_state)
from .linalg import linear_independence

DEFAULT_SEED = 0xC0FFEE


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    worst: float
    tolerance: float
    samples: int
    elapsed_s: float = 0.0
    extra: dict = field(default_factory=dict)

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (f"[{verdict}] {self.id:2d} {self.name}: worst={self.worst:.3g} "
                f"tol={self.tolerance:g} n={self.samples} ({self.elapsed_s:.2f}s)")


def _rng(seed, tag):
    return np.random.default_rng([seed, tag])


def theta_pair(theta):
    return PureEnsemble([0.5, 0.5], [[np.cos(theta), np.sin(theta)],
                                     [np.cos(theta), -np.sin(theta)]])


def check_qubit_closed_form(seed, count=1000):
    rng = _rng(seed, 1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(count):
        rho = sampling.rand_density_matrix(rng, 2)
        num = geometric_coherence(rho, SearchConfig(seed=seed), method="numerical").c_g
        worst = max(worst, abs(num - qubit_coherence(rho)))
    elapsed = time.perf_counter() - t0
    budget = 5.0
    return CheckResult(1, "qubit closed form vs numerical", worst <= 1e-7 and elapsed < budget,
                       worst, 1e-7, count, elapsed, {"runtime_budget_s": budget})


def check_worked_example(seed):
    from .cli import cmd_recover  # cli imports this module
    worst_s = worst_f = 0.0
    rows = []
    eq14 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    for theta in (np.pi / 12, np.pi / 8, np.pi / 6, np.pi / 4):
        e = theta_pair(theta)
        doc = cmd_recover(e, SearchConfig(seed=seed))
        expected = 0.5 * (1 + np.sqrt(1 - np.cos(2 * theta) ** 2))
        F = np.array([np.array(v["re"]) + 1j * np.array(v["im"]) for v in doc["measurement"]]).T
        got = np.abs(np.einsum("ij,ji->i", e.states, F.conj()))
        ref = np.abs(np.einsum("ij,ji->i", e.states, eq14.conj()))
        worst_s = max(worst_s, abs(doc["success"] - expected))
        worst_f = max(worst_f, np.abs(got - ref).max())
        rows.append({"theta": theta, "success": doc["success"], "expected": expected})
    at_pi8 = rows[1]["success"]
    ok = worst_s <= 1e-9 and worst_f <= 1e-7 and abs(at_pi8 - 0.8535533906) < 1e-9
    return CheckResult(2, "worked two-state example", ok, worst_s, 1e-9, 4,
                       extra={"rows": rows, "overlap_residual": worst_f, "success_residual": worst_s})


def check_helstrom_oracle(seed, count=200):
    rng = _rng(seed, 3)
    worst = 0.0
    for _ in range(count):
        e = sampling.rand_ensemble(rng, 2, 2)
        hel = helstrom_two(e).success
        worst = max(worst, abs(hel - bruteforce_vn_d2(e, 2000).value))
    return CheckResult(3, "Helstrom vs brute-force qubit grid", worst <= 1e-6, worst, 1e-6, count)


def check_x_block(seed, count=100):
    rng = _rng(seed, 4)
    worst = 0.0
    tags = set()
    for _ in range(count):
        rho = sampling.rand_generalized_x(rng, 4)
        closed = geometric_coherence(rho)
        tags.add(closed.method_tag)
        num = geometric_coherence(rho, SearchConfig(seed=seed), method="numerical")
        worst = max(worst, abs(closed.c_g - num.c_g))
    ok = worst <= 1e-6 and tags == {"x_block"}
    return CheckResult(4, "generalized X-state closed form", ok, worst, 1e-6, count,
                       extra={"method_tags": sorted(tags)})


def check_bound_chain(seed, count=200):
    rng = _rng(seed, 5)
    worst = -np.inf
    min_margin = np.inf
    for k in range(count):
        d = (3, 4, 5)[k % 3]
        rho = sampling.rand_density_matrix(rng, d)
        rep = geometric_coherence(rho, SearchConfig(seed=seed))
        b = rep.bounds
        if "l4" not in b:
            return CheckResult(5, "bound chain", False, np.inf, 1e-7, k + 1,
                               extra={"reason": "l4 missing for a full-rank state"})
        worst = max(worst, rep.c_g - b["l3"], rep.c_g - b["l2"], rep.c_g - b["l4"])
        min_margin = min(min_margin, b["l1"] - b["l3"])
    ok = worst <= 1e-7 and min_margin > 0
    return CheckResult(5, "bound chain c_g <= l2, l3, l4 and l3 < l1", ok, worst, 1e-7, count,
                       extra={"min_l1_minus_l3": min_margin})


def check_duality(seed, count=200):
    rng = _rng(seed, 6)
    worst = 0.0
    for k in range(count):
        rho = sampling.rand_density_matrix(rng, (2, 3, 4)[k % 3])
        res = duality_check(rho, SearchConfig(seed=seed))
        worst = max(worst, abs(res["sum"] - 1))
    return CheckResult(6, "duality c_g + d_q = 1", worst <= 1e-6, worst, 1e-6, count)


def check_equivalence(seed, count=200):
    rng = _rng(seed, 7)
    worst = worst_x = 0.0
    cfg = SearchConfig(seed=seed)
    for k in range(count):
        rho = sampling.rand_density_matrix(rng, (2, 3, 4)[k % 3])
        c_g = geometric_coherence(rho, cfg).c_g
        p = optimal_vn_search(induced_ensemble(rho), cfg).success
        worst = max(worst, abs(c_g - (1 - p)))
        gap = abs(solver_measurement_space(rho, cfg).fidelity - solver_state_space(rho, cfg).fidelity)
        worst_x = max(worst_x, gap)
    ok = worst <= 1e-6 and worst_x <= 1e-6
    return CheckResult(7, "coherence = min error on induced ensemble", ok, max(worst, worst_x),
                       1e-6, count, extra={"equivalence": worst, "cross_solver": worst_x})


def check_alignment(seed, count=200):
    rng = _rng(seed, 8)
    worst = worst_c = 0.0
    for _ in range(count):
        d = int(rng.integers(2, 6))
        k = int(rng.integers(1, d + 2))
        psi = sampling.rand_states(rng, k, d)
        V = sampling.rand_unitary(rng, d)
        phi = psi @ V.T
        U = align_unitary(psi, phi)
        worst = max(worst, np.linalg.norm(psi.T - U @ phi.T, axis=0).max())
        phi_c = psi.conj() @ V.T
        Uc = align_unitary(psi, phi_c, conjugate=True)
        worst_c = max(worst_c, np.linalg.norm(psi.T - Uc @ phi_c.conj().T, axis=0).max())
    ok = worst <= 1e-8 and worst_c <= 1e-8
    return CheckResult(8, "unitary alignment of equal-Gram families", ok, max(worst, worst_c),
                       1e-8, count, extra={"direct": worst, "conjugate": worst_c})


def multicopy_ensemble(seed):
    """Seeded 3-state ensemble in C^3 with pairwise overlaps in [0.3, 0.8]."""
    rng = _rng(seed, 9)
    while True:
        S = sampling.rand_states(rng, 3, 3)
        ov = np.abs(S.conj() @ S.T)[np.triu_indices(3, 1)]
        if ov.max() <= 0.8 and ov.min() >= 0.3:
            return PureEnsemble(rng.dirichlet(np.ones(3) * 3), S)


def check_multicopy(seed, n_max=50):
    e = multicopy_ensemble(seed)
    table = []
    ok = True
    worst = -np.inf
    prev = np.inf
    for n in range(1, n_max + 1):
        rho = multicopy_qsd_state(e, n).matrix
        ind = induced_ensemble(rho)
        err = gso_error(ind)
        row = {"n": n, "gso_error": err}
        ok &= err <= prev + 1e-15
        prev = err
        if linear_independence(ind.states)[0]:
            c_g = geometric_coherence(rho, SearchConfig(seed=seed)).c_g
            row.update(c_g=c_g, l4=c_l1(rho) / 2)
            worst = max(worst, c_g - c_l1(rho) / 2)
        table.append(row)
    ok = bool(ok and table[-1]["gso_error"] <= 1e-6 and worst <= 1e-9)
    return CheckResult(9, "multi-copy error decay", ok, table[-1]["gso_error"], 1e-6, n_max,
                       extra={"table": table, "worst_cg_minus_l4": worst})


def check_dependent(seed, count=100):
    rng = _rng(seed, 10)
    worst = -np.inf
    cfg = SearchConfig(seed=seed)
    for _ in range(count):
        e = sampling.rand_ensemble(rng, 4, 3)
        err = 1 - optimal_vn_search(e, cfg).success
        worst = max(worst, err - geometric_coherence(qsd_state(e).matrix, cfg).c_g)
    return CheckResult(10, "dependent ensembles: min error <= coherence of QSD-state",
                       worst <= 1e-6, worst, 1e-6, count)


def run_all(seed=DEFAULT_SEED, quick=False, report=None):
    """Run every check; ``report`` is called with each result as it finishes."""
    scale = 10 if quick else 1
    plan = [
        lambda: check_qubit_closed_form(seed, 1000 // scale),
        lambda: check_worked_example(seed),
        lambda: check_helstrom_oracle(seed, 200 // scale),
        lambda: check_x_block(seed, 100 // scale),
        lambda: check_bound_chain(seed, 200 // scale),
        lambda: check_duality(seed, 200 // scale),
        lambda: check_equivalence(seed, 200 // scale),
        lambda: check_alignment(seed, 200 // scale),
        lambda: check_multicopy(seed),
        lambda: check_dependent(seed, 100 // scale),
    ]
    results = []
    for step in plan:
        t0 = time.perf_counter()
        res = step()
        if not res.elapsed_s:
            res.elapsed_s = time.perf_counter() - t0
        results.append(res)
        if report is not None:
            report(res)
    return results
