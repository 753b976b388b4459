"""Active set size control via simplex-style pivoting.

State is an (n+2) x (n+2) basis matrix whose columns are either embedded
vertices (row n+1 equal to 0) or structural columns (row n+1 >= 1),
together with barycentric weights over the columns. After every
convex-combination update, one pivot step restores a basic decomposition
of the iterate, which caps the active set at n+1 vertices.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import linalg
from .fw_core import (
    ActiveSet,
    DROP_THRESHOLD,
    STEP_FUNCTIONS,
    Trajectory,
    TrajectoryRecord,
)
from .geometry import dn_columns
from .linalg import SingularMatrix, factor, reconstruction_residual, solve

# Residual ceiling after weight projection; exceeding it is a hard error.
RESIDUAL_TOL = 1e-7

# Negative-entry threshold for ratio-test candidates, relative to ||r||_inf.
NEGATIVE_TOL = 1e-12


class NoNegativeEntry(Exception):
    """The pivot direction has no negative entry: numerical failure."""


class ReconstructionDrift(Exception):
    """The decomposition no longer reconstructs the iterate."""


class PivotState:
    """Basis matrix, per-column vertex tags and barycentric weights."""

    def __init__(self, M, tags, vertex_by_key, lam, factorization):
        self.M = M
        self.tags = tags  # per column: vertex key, or None for structural
        self.vertex_by_key = vertex_by_key
        self.lam = lam
        self.factorization = factorization

    @property
    def order(self):
        return self.M.shape[0]

    def column_of(self, key):
        return self.tags.index(key)

    def active_keys(self):
        return [k for k in self.tags if k is not None]

    def refactor(self):
        self.factorization = factor(self.M)


@dataclass
class ReducedDecomposition:
    alpha: dict  # vertex key -> weight
    S: dict  # vertex key -> Vertex
    size: int


def project_simplex(v):
    """Euclidean projection onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > (css - 1.0))[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def init_pivot(x0, n):
    """Initial state: the embedded start vertex next to the structural block."""
    M = np.empty((n + 2, n + 2))
    M[:, 0] = x0.extended()
    for i, col in enumerate(dn_columns(n)):
        M[:, i + 1] = col
    tags = [x0.key] + [None] * (n + 1)
    lam = np.zeros(n + 2)
    lam[0] = 1.0
    return PivotState(M, tags, {x0.key: x0}, lam, factor(M))


def _merge_zero_vertex_columns(state, lam):
    """Fold weightless vertex columns into a structural column.

    Columns with zero weight and zero in row n+1 would otherwise violate
    the vertex-column invariant; adding a structural column makes row
    n+1 positive again. Merged columns lose their vertex tag.
    """
    n_row = state.order - 2
    row = state.M[n_row]
    ell = int(np.nonzero(row)[0][0])
    merged = False
    for i in range(state.order):
        if lam[i] <= DROP_THRESHOLD and row[i] == 0.0:
            if lam[i] != 0.0:
                lam[i] = 0.0
            state.M[:, i] += state.M[:, ell]
            state.tags[i] = None
            merged = True
    return merged


def _extract(state, x_ext, debug, beta=None):
    lam = state.lam
    support = [i for i, tag in enumerate(state.tags) if tag is not None]
    if support:
        projected = project_simplex(lam[support])
        projected[projected <= DROP_THRESHOLD] = 0.0
        projected /= projected.sum()
        lam[:] = 0.0
        lam[support] = projected
    # projection may have zeroed a vertex column entirely
    if any(lam[i] == 0.0 for i in support):
        if _merge_zero_vertex_columns(state, lam):
            state.refactor()
    resid = reconstruction_residual(state.M, lam, x_ext)
    if resid > RESIDUAL_TOL:
        raise ReconstructionDrift(f"residual {resid:.3e} exceeds {RESIDUAL_TOL:.0e}")
    alpha = {}
    S = {}
    for i, tag in enumerate(state.tags):
        if tag is not None and lam[i] > 0.0:
            alpha[tag] = lam[i]
            S[tag] = state.vertex_by_key[tag]
    decomposition = ReducedDecomposition(alpha, S, len(S))
    if debug:
        _debug_checks(state, decomposition, x_ext, beta)
    return decomposition, resid


def _debug_checks(state, decomposition, x_ext, beta):
    n = state.order - 2
    M, lam = state.M, state.lam
    assert np.all(M[n, :] >= 0.0), "row n+1 has a negative entry"
    assert np.all(M[n + 1, :] >= 1.0 - 1e-12), "row n+2 below one"
    solve(state.factorization, x_ext)  # raises if the factorization is unusable
    for i in range(state.order):
        if lam[i] > 0.0:
            assert state.tags[i] is not None
            if beta is not None:
                assert state.tags[i] in beta, "active column outside T"
            col = state.vertex_by_key[state.tags[i]].extended()
            assert np.array_equal(M[:, i], col)
        if M[n, i] == 0.0:
            assert state.tags[i] is not None and lam[i] > 0.0
        if state.tags[i] is not None:
            assert M[n, i] == 0.0
    assert decomposition.size <= n + 1
    if beta is not None:
        assert set(decomposition.alpha) <= set(beta), "S not a subset of T"
        x_beta = np.zeros(state.order)
        for key, w in beta.items():
            x_beta += w * state.vertex_by_key[key].extended()
        x_alpha = np.zeros(state.order)
        for key, w in decomposition.alpha.items():
            x_alpha += w * state.vertex_by_key[key].extended()
        assert np.max(np.abs(x_beta - x_alpha)) <= 1e-10, "iterate not conserved"


def asc(state, beta, T, D, debug=False):
    """One active set cleanup: relabel or pivot, merge, project, extract.

    Mutates `state` and returns (state, ReducedDecomposition). `beta`
    maps vertex keys to the post-update weights, `T` maps keys to the
    vertices, and `D` lists the at most one entering vertex.
    """
    if len(D) > 1:
        raise ValueError("at most one vertex may enter per update")
    state.vertex_by_key.update(T)
    x_ext = np.zeros(state.order)
    for key, w in beta.items():
        x_ext += w * T[key].extended()
    modified = False
    if not D:
        lam = np.zeros(state.order)
        for i, tag in enumerate(state.tags):
            if tag is not None and tag in beta:
                lam[i] = beta[tag]
    else:
        v = D[0]
        v_ext = v.extended()
        mu = np.zeros(state.order)
        for i, tag in enumerate(state.tags):
            if tag is not None and tag in beta:
                mu[i] = beta[tag]
        lam, k = _pivot(state, mu, v_ext, beta[v.key])
        state.M[:, k] = v_ext
        state.tags[k] = v.key
        modified = True
    state.lam = lam
    if _merge_zero_vertex_columns(state, lam):
        modified = True
    if modified:
        state.refactor()
    decomposition, _ = _extract(state, x_ext, debug, beta=beta)
    return state, decomposition


def _pivot(state, mu, v_ext, beta_v):
    """Ratio-test pivot bringing the entering column into the basis."""
    r = -solve(state.factorization, v_ext)
    for attempt in range(2):
        floor = -NEGATIVE_TOL * max(1.0, float(np.max(np.abs(r))))
        candidates = np.nonzero(r < floor)[0]
        if len(candidates):
            break
        if attempt == 0:
            state.refactor()
            r = -solve(state.factorization, v_ext)
    else:
        raise NoNegativeEntry("pivot direction is nonnegative after refactorization")
    ratios = -mu[candidates] / r[candidates]
    k = int(candidates[int(np.argmin(ratios))])  # argmin ties -> lowest index
    theta = max(-mu[k] / r[k], 0.0)
    lam = mu + theta * r
    lam[lam < 0.0] = 0.0
    # the entering column keeps its incoming weight plus the pivot length
    lam[k] = beta_v + theta
    return lam, k


def run_pm(algorithm, region, objective, rule, max_iter, gap_tol=0.0, x0=None,
           debug=False):
    """Plain runner wrapped with a cleanup after every update."""
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    step_fn = STEP_FUNCTIONS[algorithm]
    start = x0 if x0 is not None else region.initial_vertex()
    state = ActiveSet.from_vertex(start)
    pivot_state = init_pivot(start, region.ambient_dim)
    traj = Trajectory()
    t0 = time.perf_counter_ns()
    for t in range(max_iter + 1):
        grad = objective.gradient(state.x)
        v = region.lmo(grad)
        gap = float(grad @ state.x) - v.dot(grad)
        primal = objective.value(state.x)
        traj.snapshot(state)
        if gap <= gap_tol or t == max_iter:
            resid = reconstruction_residual(
                pivot_state.M, pivot_state.lam, np.concatenate([state.x, [0.0, 1.0]])
            )
            traj.records.append(
                TrajectoryRecord(t, primal, gap, state.size(), state.size(), "-",
                                 time.perf_counter_ns() - t0, resid)
            )
            break
        outcome = step_fn(state, objective, region, rule, t, grad=grad, fw_vertex=v)
        try:
            pivot_state, decomposition = asc(
                pivot_state, outcome.beta, outcome.T, outcome.D, debug=debug
            )
        except (NoNegativeEntry, ReconstructionDrift, SingularMatrix) as exc:
            exc.args = (f"iteration {t}: {exc}",)
            raise
        resid = reconstruction_residual(
            pivot_state.M, pivot_state.lam,
            np.concatenate([outcome.x_new, [0.0, 1.0]]),
        )
        traj.records.append(
            TrajectoryRecord(t, primal, gap, decomposition.size, len(outcome.T),
                             outcome.step_kind, time.perf_counter_ns() - t0, resid)
        )
        state = ActiveSet.from_weights(
            decomposition.alpha, decomposition.S, x=outcome.x_new
        )
    traj.final_state = state
    return traj
