"""Minimum-error discrimination of pure states with von Neumann measurements."""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import (DimMismatch, InvalidEnsemble, InvalidMeasurement,
                     NoConvergence, WrongArity)
from .ensembles import TOL_ZERO_PRIOR, PureEnsemble
from .linalg import TOL_RANK, eigh, fix_phases, polar_unitaries, trace_norm

TOL_NUM = 1e-9


@dataclass(frozen=True)
class VonNeumannMeasurement:
    """Orthonormal basis; ``basis[:, i]`` is the outcome that declares state ``i``."""
    basis: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.basis, dtype=complex)
        if F.ndim != 2 or F.shape[0] != F.shape[1]:
            raise InvalidMeasurement(f"basis must be square, got shape {F.shape}")
        err = np.abs(F.conj().T @ F - np.eye(F.shape[0])).max() if F.size else 0.0
        if err > 1e-8:
            raise InvalidMeasurement(f"basis is not orthonormal (residual {err:.3g})")
        object.__setattr__(self, "basis", F)

    @property
    def dim(self):
        return self.basis.shape[0]


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    max_iters: int = 500
    tol_opt: float = 1e-12
    seed: int = 0xC0FFEE


@dataclass
class DiscriminationResult:
    success: float
    measurement: VonNeumannMeasurement
    method_tag: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def error(self):
        return 1.0 - self.success


def _padded_states(e, dim):
    S = e.states
    if S.shape[1] > dim:
        raise DimMismatch(f"ensemble dim {S.shape[1]} exceeds measurement dim {dim}")
    if S.shape[1] < dim:
        S = np.hstack([S, np.zeros((S.shape[0], dim - S.shape[1]))])
    return S


def assignment_probabilities(e, m):
    """``|<f_i|psi_i>|^2`` for each state; states beyond the basis score 0."""
    S = _padded_states(e, m.dim)
    k = min(len(e), m.dim)
    p = np.zeros(len(e))
    p[:k] = np.abs(np.einsum("ij,ji->i", S[:k], m.basis[:, :k].conj())) ** 2
    return p


def success_probability(e, m):
    """Average probability of a correct guess, ``sum_i eta_i |<f_i|psi_i>|^2``.

    A measurement of larger dimension than the ensemble is accepted; the
    states are then embedded by zero padding (a Naimark extension).
    """
    val = float(e.priors @ assignment_probabilities(e, m))
    return min(max(val, 0.0), 1.0)


def complete_basis(vectors, dim):
    """Extend orthonormal columns ``vectors`` to an orthonormal basis of C^dim."""
    V = np.asarray(vectors, dtype=complex).reshape(dim, -1)
    cols = [V[:, k] for k in range(V.shape[1])]
    for k in range(dim):
        if len(cols) == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[k] = 1.0
        for _ in range(2):
            for c in cols:
                v = v - c * (c.conj() @ v)
        n = np.linalg.norm(v)
        if n > 1e-6:
            cols.append(v / n)
    return np.column_stack(cols) if cols else np.zeros((dim, 0), dtype=complex)


def helstrom_two(e):
    """Optimal discrimination of two pure states.

    The success probability is ``(1 + ||Lambda||_1) / 2`` with
    ``Lambda = eta_1 |psi_1><psi_1| - eta_2 |psi_2><psi_2|``; the measurement
    sends the top eigenvector of ``Lambda`` to state 1 and the bottom one to
    state 2.
    """
    if len(e) != 2:
        raise WrongArity(f"Helstrom measurement needs exactly 2 states, got {len(e)}")
    if e.dim < 2:
        raise DimMismatch("two states need at least a 2-dimensional space")
    (p1, p2), (s1, s2) = e.priors, e.states
    lam = p1 * np.outer(s1, s1.conj()) - p2 * np.outer(s2, s2.conj())
    w, V = eigh(lam)
    F = np.column_stack([V[:, -1], V[:, 0]] + [V[:, k] for k in range(1, e.dim - 1)])
    success = 0.5 * (1 + trace_norm(lam))
    overlap = abs(np.vdot(s1, s2)) ** 2
    closed = 0.5 * (1 + np.sqrt(max(0.0, 1 - 4 * p1 * p2 * overlap)))
    return DiscriminationResult(
        min(success, 1.0), VonNeumannMeasurement(F), "helstrom",
        {"closed_form": closed, "lambda_eigenvalues": w.tolist()})


@dataclass(frozen=True)
class GSOMeasurement:
    measurement: VonNeumannMeasurement
    order: tuple      # original indices sorted by descending prior
    selected: tuple   # original indices kept as an independent set, in GSO order


def gso_measurement(e, tol_rank=TOL_RANK):
    """Gram-Schmidt measurement.

    States are sorted by prior (ties broken by lower index), a maximal
    linearly independent subsequence is picked greedily and orthogonalised,
    and the result is completed to a basis. Vector ``i`` of the returned
    basis targets original state ``i``; dropped and zero-prior states get
    completion vectors, which are orthogonal to every ensemble state.
    """
    if len(e) > e.dim:
        d = len(e)
        S = np.hstack([e.states, np.zeros((len(e), d - e.dim))])
    else:
        d = e.dim
        S = e.states
    order = tuple(int(i) for i in np.argsort(-e.priors, kind="stable"))
    chosen, phis = [], []
    for i in order:
        if e.priors[i] <= TOL_ZERO_PRIOR:
            continue
        v = S[i].astype(complex)
        for _ in range(2):
            for phi in phis:
                v = v - phi * (phi.conj() @ v)
        n2 = float(np.real(v.conj() @ v))
        if n2 > tol_rank:
            chosen.append(i)
            phis.append(v / np.sqrt(n2))
    full = complete_basis(np.column_stack(phis) if phis else np.zeros((d, 0)), d)
    F = np.zeros((d, d), dtype=complex)
    spare = iter(range(len(phis), d))
    for pos, i in enumerate(chosen):
        F[:, i] = full[:, pos]
    for i in range(d):
        if i not in chosen:
            F[:, i] = full[:, next(spare)]
    return GSOMeasurement(VonNeumannMeasurement(F), order, tuple(chosen))


def gso_error(e, tol_rank=TOL_RANK):
    """Error probability of the Gram-Schmidt measurement.

    Sum over the selected states of ``xi_i * sum_{j<i} |<phi_j|varphi_i>|^2``
    plus the prior mass of the states left out of the independent set.
    """
    g = gso_measurement(e, tol_rank)
    if len(e) > e.dim:
        S = np.hstack([e.states, np.zeros((len(e), len(e) - e.dim))])
    else:
        S = e.states
    F = g.measurement.basis
    err = 0.0
    for pos, i in enumerate(g.selected):
        prev = F[:, list(g.selected[:pos])]
        err += e.priors[i] * float(np.sum(np.abs(prev.conj().T @ S[i]) ** 2))
    left_out = [i for i in range(len(e)) if i not in g.selected]
    err += float(e.priors[left_out].sum())
    return err


def haar_unitaries(rng, count, d):
    Z = (rng.normal(size=(count, d, d)) + 1j * rng.normal(size=(count, d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diagonal(R, axis1=1, axis2=2)
    ph = ph / np.where(np.abs(ph) > 0, np.abs(ph), 1)
    return Q * ph[:, None, :]


def squarem_cycle(step, value, project, X, v):
    """One safeguarded SQUAREM cycle for a monotone fixed-point map.

    ``step`` is the base ascent map, ``value`` the objective and ``project``
    maps extrapolated points back onto the feasible set; all act on a batch
    along axis 0. Two base steps are taken, the squared extrapolation is
    projected and stepped once more, and the better of the two candidates
    is kept, so the objective never drops below that of the plain steps.
    """
    X1 = step(X)
    X2 = step(X1)
    v2 = value(X2)
    n = X.shape[0]
    r = X1 - X
    w = X2 - X1 - r
    nr = np.linalg.norm(r.reshape(n, -1), axis=1)
    nw = np.linalg.norm(w.reshape(n, -1), axis=1)
    moving = nw > 0
    alpha = np.minimum(-np.divide(nr, nw, out=np.ones_like(nr), where=moving), -1.0)
    alpha = alpha.reshape((-1,) + (1,) * (X.ndim - 1))
    Xx = step(project(X - 2 * alpha * r + alpha ** 2 * w))
    vx = value(Xx)
    take = (vx >= v2) & moving
    if take.all():
        return Xx, vx
    if not take.any():
        return X2, v2
    X2[take] = Xx[take]
    v2[take] = vx[take]
    return X2, v2


def _unitary_map(A):
    def overlaps(F):
        return np.einsum("rij,ij->rj", F.conj(), A)

    def step(F):
        return polar_unitaries(A[None, :, :] * overlaps(F).conj()[:, None, :])

    def value(F):
        return np.sum(np.abs(overlaps(F)) ** 2, axis=1)

    def project(F):
        # step() accepts any matrix and returns a unitary
        return F

    return step, value, project


def monotone_ascent(step, value, project, X0, max_iters, tol_opt):
    """Run :func:`squarem_cycle` on a batch of starts until each one's gain
    drops below ``tol_opt``. Returns final points, values, cycle counts, the
    mask of starts that hit ``max_iters``, and whether every accepted cycle
    was non-decreasing."""
    X = X0.copy()
    n = X.shape[0]
    values = value(X)
    active = np.ones(n, dtype=bool)
    iters = np.zeros(n, dtype=int)
    monotone = True
    for _ in range(max_iters):
        if active.all():
            Xn, vn = squarem_cycle(step, value, project, X, values)
            gain = vn - values
            monotone &= bool(gain.min() >= -1e-12)
            up = gain >= 0
            if up.all():
                X, values = Xn, vn
            else:
                X[up], values[up] = Xn[up], vn[up]
            iters += 1
            active = gain >= tol_opt
            continue
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xn, vn = squarem_cycle(step, value, project, X[idx], values[idx])
        gain = vn - values[idx]
        monotone &= bool(np.all(gain >= -1e-12))
        up = gain >= 0
        X[idx[up]] = Xn[up]
        values[idx[up]] = vn[up]
        iters[idx] += 1
        active[idx[gain < tol_opt]] = False
    return X, values, iters, active, monotone


def _polish(A, F, k, max_iters, tol_step=1e-12):
    """Keep iterating one start until its first ``k`` basis vectors stop moving.

    The objective is flat at the optimum, so an objective-based stop leaves
    the basis itself accurate only to about the square root of the tolerance.
    Each round takes one plain step as the motion test and, if the basis
    still moves, one accelerated cycle.
    """
    step, value, project = _unitary_map(A)
    X = F[None]
    v = value(X)
    for it in range(max_iters):
        Xs = step(X)
        ph = np.einsum("ij,ij->j", Xs[0][:, :k].conj(), X[0][:, :k])
        ph = ph / np.where(np.abs(ph) > 0, np.abs(ph), 1)
        moved = np.abs(Xs[0][:, :k] * ph - X[0][:, :k]).max() if k else 0.0
        if moved < tol_step:
            return Xs[0], it + 1
        Xn, vn = squarem_cycle(step, value, project, Xs, value(Xs))
        if vn[0] < v[0] - 1e-14:
            return Xs[0], it + 1
        X, v = Xn, vn
    return X[0], max_iters


def optimal_vn_search(e, config=SearchConfig()):
    """Best von Neumann measurement found by monotone ascent with restarts.

    The base step replaces the basis ``F`` by the polar factor of the
    matrix with columns ``a_i conj(<f_i|a_i>)`` (``a_i = sqrt(eta_i) psi_i``),
    which never decreases ``sum_i |<f_i|a_i>|^2``; SQUAREM extrapolation
    speeds it up where the optimum is badly conditioned.

    Restarts are Haar-random bases plus the Gram-Schmidt measurement as a
    warm start; the best objective wins. When the ensemble has more states
    than dimensions the search runs in ``C^len(e)`` with zero-padded
    states, i.e. over rank-one POVMs on the original space.
    """
    d = max(e.dim, len(e))
    S = np.hstack([e.states, np.zeros((len(e), d - e.dim))]) if d > e.dim else e.states
    A = np.zeros((d, d), dtype=complex)
    A[:, :len(e)] = (S * np.sqrt(e.priors)[:, None]).T
    # restart r always takes slice r of the stream seeded by config.seed
    rng = np.random.default_rng(config.seed)
    F0 = np.concatenate([gso_measurement(e).measurement.basis[None],
                         haar_unitaries(rng, config.restarts, d)])
    F, values, iters, unconverged, monotone = monotone_ascent(
        *_unitary_map(A), F0, config.max_iters, config.tol_opt)
    best = int(np.argmax(values))
    if unconverged[best]:
        raise NoConvergence(
            f"ascent did not stall below {config.tol_opt:g} within {config.max_iters} iterations")
    F_best, polish = _polish(A, F[best], len(e), config.max_iters)
    m = VonNeumannMeasurement(fix_phases(F_best))
    success = success_probability(e, m)
    diag = {"restarts_used": int(F0.shape[0]), "best_start": best,
            "iterations": int(iters[best]), "polish_iterations": polish,
            "total_iterations": int(iters.sum()),
            "monotone": monotone, "restart_values": values.tolist()}
    return DiscriminationResult(success, m, "search", diag)


class BruteForceResult(NamedTuple):
    value: float
    resolution: float
    measurement: VonNeumannMeasurement


def _qubit_basis(t, phi):
    return np.array([[np.cos(t), -np.exp(-1j * phi) * np.sin(t)],
                     [np.exp(1j * phi) * np.sin(t), np.cos(t)]])


def bruteforce_vn_d2(e, grid_n=2000):
    """Exhaustive grid search over qubit bases, then a local polish.

    The basis ``f_1 = (cos t, e^{i phi} sin t)``, ``f_2 = (-e^{-i phi} sin t,
    cos t)`` covers every orthonormal basis up to per-vector phases. Returns
    the best value, an a-priori bound on how far the raw grid maximum can
    sit below the true optimum, and the maximising measurement.
    """
    if e.dim != 2:
        raise DimMismatch("bruteforce_vn_d2 needs a qubit ensemble")
    if len(e) > 2:
        raise InvalidEnsemble("a qubit basis has two outcomes")
    pri = np.zeros(2)
    S = np.zeros((2, 2), dtype=complex)
    pri[:len(e)] = e.priors
    S[:len(e)] = e.states
    t = np.linspace(0, np.pi / 2, grid_n)
    phi = np.linspace(0, 2 * np.pi, grid_n, endpoint=False)
    ct, st = np.cos(t), np.sin(t)
    # |<f_1|s1>|^2 = c^2|a|^2 + s^2|b|^2 + 2cs Re(conj(a) b e^{-i phi})
    # |<f_2|s2>|^2 = s^2|a|^2 + c^2|b|^2 - 2cs Re(conj(a) b e^{-i phi})
    (a1, b1), (a2, b2) = S
    base = (pri[0] * (ct**2 * abs(a1)**2 + st**2 * abs(b1)**2)
            + pri[1] * (st**2 * abs(a2)**2 + ct**2 * abs(b2)**2))
    cross = pri[0] * np.conj(a1) * b1 - pri[1] * np.conj(a2) * b2
    osc = np.real(cross * np.exp(-1j * phi))
    grid = base[:, None] + 2 * (ct * st)[:, None] * osc[None, :]
    i, j = np.unravel_index(np.argmax(grid), grid.shape)
    def neg(x):
        m = VonNeumannMeasurement(_qubit_basis(*x))
        return -(pri[:len(e)] @ assignment_probabilities(e, m))
    res = minimize(neg, [t[i], phi[j]], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
    x = res.x if -res.fun >= grid[i, j] else np.array([t[i], phi[j]])
    value = max(-res.fun, grid[i, j])
    # |d/dt| <= 3 and |d/dphi| <= 1; the optimum is within half a cell
    dt = t[1] - t[0]
    dphi = phi[1] - phi[0]
    resolution = float(3 * dt / 2 + dphi / 2)
    return BruteForceResult(float(value), resolution, VonNeumannMeasurement(_qubit_basis(*x)))
