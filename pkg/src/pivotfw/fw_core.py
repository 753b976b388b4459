"""Frank-Wolfe style steps expressed as convex-combination updates.

Each step function emits a CCUOutcome: the new weights, the new support,
the set difference D (at most one entering vertex) and the new iterate.
The plain runner iterates these without any active set cleanup.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .objectives import choose_step

# Weights at or below this are treated as zero and the vertex dropped.
DROP_THRESHOLD = 1e-12

# Cap on the away-step interval alpha/(1-alpha) when alpha approaches 1.
AWAY_ETA_CAP = 1e12


class ActiveSet:
    """Ordered vertex -> positive weight association with a cached iterate."""

    def __init__(self, entries, x=None):
        # entries: dict key -> (Vertex, weight), insertion ordered
        self.entries = entries
        if x is None:
            x = self.reconstruct()
        self.x = x

    @classmethod
    def from_vertex(cls, v):
        return cls({v.key: (v, 1.0)}, x=v.dense())

    @classmethod
    def from_weights(cls, alpha, vertices, x=None):
        entries = {
            k: (vertices[k], w) for k, w in alpha.items() if w > DROP_THRESHOLD
        }
        return cls(entries, x=x)

    def reconstruct(self):
        dim = next(iter(self.entries.values()))[0].dim
        x = np.zeros(dim)
        for v, w in self.entries.values():
            x[v.indices] += w * v.values
        return x

    def size(self):
        return len(self.entries)

    def weight(self, key):
        return self.entries[key][1]

    def vertices(self):
        return {k: v for k, (v, _) in self.entries.items()}

    def weights(self):
        return {k: w for k, (_, w) in self.entries.items()}

    def away_vertex(self, grad):
        """Support vertex maximizing <grad, s>; ties go to the lowest key."""
        return max(
            self.entries.values(), key=lambda vw: (vw[0].dot(grad), _neg_key(vw[0]))
        )[0]

    def local_fw_vertex(self, grad):
        """Support vertex minimizing <grad, s>; ties go to the lowest key."""
        return min(self.entries.values(), key=lambda vw: (vw[0].dot(grad), vw[0].key))[0]

    def check(self, tol_sum=1e-12, tol_x=1e-10):
        weights = np.array([w for _, w in self.entries.values()])
        assert abs(weights.sum() - 1.0) <= tol_sum * max(1.0, len(weights))
        assert np.all(weights > DROP_THRESHOLD)
        assert np.max(np.abs(self.reconstruct() - self.x)) <= tol_x


class _KeyDescending:
    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other):
        return self.key > other.key


def _neg_key(v):
    # reverses key order so that max() breaks ties at the lowest key
    return _KeyDescending(v.key)


@dataclass
class CCUOutcome:
    """One convex-combination update: weights beta over support T, with
    |D| <= 1 the set of vertices entering the support."""

    beta: dict
    T: dict
    D: list
    x_new: np.ndarray
    step_kind: str
    eta: float


def _renormalize(beta):
    """Drop weights at the floor and rescale the rest to sum to one."""
    kept = {k: w for k, w in beta.items() if w > DROP_THRESHOLD}
    total = sum(kept.values())
    return {k: w / total for k, w in kept.items()}


def _finish(state, beta, vertices, eta, d_vec, step_kind, new_vertex=None):
    beta = _renormalize(beta)
    T = {k: vertices[k] for k in beta}
    D = []
    if new_vertex is not None and new_vertex.key in beta and new_vertex.key not in state.entries:
        D = [new_vertex]
    x_new = state.x + eta * d_vec
    return CCUOutcome(beta, T, D, x_new, step_kind, eta)


def fw_step(state, objective, region, rule, t, grad=None, fw_vertex=None):
    """Classic step toward the LMO vertex."""
    if grad is None:
        grad = objective.gradient(state.x)
    v = fw_vertex if fw_vertex is not None else region.lmo(grad)
    d = v.dense() - state.x
    if not np.any(d):
        return CCUOutcome(state.weights(), state.vertices(), [], state.x.copy(), "fw", 0.0)
    eta = choose_step(rule, objective, state.x, d, 1.0, t)
    vertices = state.vertices()
    vertices[v.key] = v
    beta = {k: (1.0 - eta) * w for k, w in state.weights().items()}
    beta[v.key] = beta.get(v.key, 0.0) + eta
    return _finish(state, beta, vertices, eta, d, "fw", new_vertex=v)


def afw_step(state, objective, region, rule, t, grad=None, fw_vertex=None):
    """Away-step variant: moves away from the worst support vertex when
    that direction is strictly more promising than the FW direction."""
    if grad is None:
        grad = objective.gradient(state.x)
    v = fw_vertex if fw_vertex is not None else region.lmo(grad)
    a = state.away_vertex(grad)
    fw_score = v.dot(grad) - float(grad @ state.x)
    away_score = float(grad @ state.x) - a.dot(grad)
    # ties go to the FW branch; a singleton support has zero away gap
    if fw_score <= away_score or state.size() == 1:
        return fw_step(state, objective, region, rule, t, grad=grad, fw_vertex=v)
    alpha_a = state.weight(a.key)
    eta_max = alpha_a / (1.0 - alpha_a) if alpha_a < 1.0 else AWAY_ETA_CAP
    d = state.x - a.dense()
    eta = choose_step(rule, objective, state.x, d, eta_max, t)
    if eta_max - eta <= 1e-12 * max(1.0, eta_max):
        eta = eta_max  # maximal away step drops the away vertex
    beta = {k: (1.0 + eta) * w for k, w in state.weights().items()}
    beta[a.key] -= eta
    kind = "drop" if beta[a.key] <= DROP_THRESHOLD else "away"
    return _finish(state, beta, state.vertices(), eta, d, kind)


def bpfw_step(state, objective, region, rule, t, grad=None, fw_vertex=None):
    """Blended pairwise variant: transfers weight between two support
    vertices unless the global FW direction dominates."""
    if grad is None:
        grad = objective.gradient(state.x)
    v = fw_vertex if fw_vertex is not None else region.lmo(grad)
    a = state.away_vertex(grad)
    w = state.local_fw_vertex(grad)
    fw_score = v.dot(grad) - float(grad @ state.x)
    pair_score = w.dot(grad) - a.dot(grad)
    if fw_score < pair_score or a.key == w.key:
        return fw_step(state, objective, region, rule, t, grad=grad, fw_vertex=v)
    alpha_a = state.weight(a.key)
    d = w.dense() - a.dense()
    eta = choose_step(rule, objective, state.x, d, alpha_a, t)
    if alpha_a - eta <= 1e-12 * max(1.0, alpha_a):
        eta = alpha_a
    beta = state.weights()
    beta[a.key] -= eta
    beta[w.key] += eta
    kind = "drop" if beta[a.key] <= DROP_THRESHOLD else "pairwise"
    return _finish(state, beta, state.vertices(), eta, d, kind)


STEP_FUNCTIONS = {"fw": fw_step, "afw": afw_step, "bpfw": bpfw_step}


def fw_gap(objective, region, x):
    """Dual gap max_v <grad f(x), x - v>; zero exactly at stationarity."""
    grad = objective.gradient(x)
    v = region.lmo(grad)
    return float(grad @ x) - v.dot(grad)


@dataclass
class TrajectoryRecord:
    iter: int
    primal: float
    fw_gap: float
    active_set_size: int
    pre_cleanup_size: int | None
    step_kind: str
    wall_time_ns: int
    reconstruction_residual: float


@dataclass
class Trajectory:
    records: list = field(default_factory=list)
    xs: list = field(default_factory=list)
    supports: list = field(default_factory=list)
    final_state: ActiveSet | None = None

    def snapshot(self, state):
        self.xs.append(state.x.copy())
        self.supports.append(tuple(v.support() for v, _ in state.entries.values()))

    @property
    def final_x(self):
        return self.xs[-1]


def run_plain(algorithm, region, objective, rule, max_iter, gap_tol=0.0, x0=None):
    """Iterate a step function until the gap tolerance or the budget."""
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    step_fn = STEP_FUNCTIONS[algorithm]
    state = ActiveSet.from_vertex(x0 if x0 is not None else region.initial_vertex())
    traj = Trajectory()
    t0 = time.perf_counter_ns()
    for t in range(max_iter + 1):
        grad = objective.gradient(state.x)
        v = region.lmo(grad)
        gap = float(grad @ state.x) - v.dot(grad)
        primal = objective.value(state.x)
        resid = float(np.max(np.abs(state.reconstruct() - state.x)))
        traj.snapshot(state)
        if gap <= gap_tol or t == max_iter:
            traj.records.append(
                TrajectoryRecord(t, primal, gap, state.size(), None, "-",
                                 time.perf_counter_ns() - t0, resid)
            )
            break
        outcome = step_fn(state, objective, region, rule, t, grad=grad, fw_vertex=v)
        traj.records.append(
            TrajectoryRecord(t, primal, gap, state.size(), None, outcome.step_kind,
                             time.perf_counter_ns() - t0, resid)
        )
        state = ActiveSet.from_weights(outcome.beta, outcome.T, x=outcome.x_new)
    traj.final_state = state
    return traj
