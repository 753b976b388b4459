"""Smooth convex objectives and step-size rules.

Objectives expose value/gradient plus a smoothness constant where one is
cheap to compute. Quadratic objectives additionally expose a closed-form
exact line search; everything else falls back to golden-section search.
"""

import numpy as np


class MissingConstant(Exception):
    """A step rule needs a constant (L) the objective does not report."""


class Objective:
    """Base interface: value(x), gradient(x), optional L and mu."""

    L = None
    mu = None

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def exact_step(self, x, d, eta_max):
        """Closed-form argmin_{eta in [0, eta_max]} f(x + eta d), or None."""
        return None


class LeastSquares(Objective):
    """f(x) = ||A x - y||^2."""

    def __init__(self, A, y):
        A = np.asarray(A, dtype=float)
        y = np.asarray(y, dtype=float)
        if A.shape[0] != y.shape[0]:
            raise ValueError("A and y have inconsistent shapes")
        self.A = A
        self.y = y
        self.L = 2.0 * float(np.linalg.norm(A, 2)) ** 2

    def value(self, x):
        r = self.A @ x - self.y
        return float(r @ r)

    def gradient(self, x):
        return 2.0 * (self.A.T @ (self.A @ x - self.y))

    def exact_step(self, x, d, eta_max):
        Ad = self.A @ d
        denom = 2.0 * float(Ad @ Ad)
        if denom == 0.0:
            return 0.0
        num = float(-self.gradient(x) @ d)
        return min(max(num / denom, 0.0), eta_max)


class Logistic(Objective):
    """f(x) = (1/m) sum_i log(1 + exp(-y_i a_i^T x)), labels in {-1, +1}."""

    def __init__(self, features, labels):
        features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=float)
        if features.shape[0] != labels.shape[0]:
            raise ValueError("features and labels have inconsistent shapes")
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        self.features = features
        self.labels = labels
        self.m = features.shape[0]
        self.L = float(np.linalg.norm(features, 2)) ** 2 / (4.0 * self.m)

    def value(self, x):
        margins = self.labels * (self.features @ x)
        return float(np.mean(np.logaddexp(0.0, -margins)))

    def gradient(self, x):
        margins = self.labels * (self.features @ x)
        # sigma(-margins), computed stably
        w = np.where(
            margins >= 0,
            np.exp(-np.logaddexp(0.0, margins)),
            1.0 - np.exp(-np.logaddexp(0.0, -margins)),
        )
        return -(self.features.T @ (self.labels * w)) / self.m


class Quadratic(Objective):
    """f(x) = ||x - p||^2, the distance-squared objective."""

    L = 2.0
    mu = 2.0

    def __init__(self, p):
        self.p = np.asarray(p, dtype=float)

    def value(self, x):
        r = x - self.p
        return float(r @ r)

    def gradient(self, x):
        return 2.0 * (x - self.p)

    def exact_step(self, x, d, eta_max):
        denom = 2.0 * float(d @ d)
        if denom == 0.0:
            return 0.0
        num = float(-self.gradient(x) @ d)
        return min(max(num / denom, 0.0), eta_max)


def least_squares(A, y):
    return LeastSquares(A, y)


def logistic(features, labels):
    return Logistic(features, labels)


class StepRule:
    """Step-size rule: line-search, short-step, open-loop(l), fixed, adaptive.

    The adaptive rule keeps a running smoothness estimate (backtracking
    with shrink 0.9 and growth 2.0) and therefore carries mutable state;
    use one rule instance per run.
    """

    def __init__(self, kind, ell=2, eta=None, L_estimate=1.0):
        if kind not in ("line-search", "short-step", "open-loop", "fixed", "adaptive"):
            raise ValueError(f"unknown step rule {kind!r}")
        if kind == "fixed" and eta is None:
            raise ValueError("fixed step rule needs a step size")
        self.kind = kind
        self.ell = int(ell)
        self.eta = eta
        self.L_estimate = float(L_estimate)
        self.shrink = 0.9
        self.growth = 2.0

    @classmethod
    def parse(cls, spec):
        if ":" in spec:
            kind, arg = spec.split(":", 1)
            if kind == "open-loop":
                return cls(kind, ell=int(arg))
            if kind == "fixed":
                return cls(kind, eta=float(arg))
            raise ValueError(f"unknown step rule spec {spec!r}")
        return cls(spec)


GOLDEN_TOL = 1e-10
GOLDEN_MAX_ITER = 200


def golden_section(phi, lo, hi, tol=GOLDEN_TOL, max_iter=GOLDEN_MAX_ITER):
    """Minimize a unimodal function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = phi(d)
    mid = 0.5 * (a + b)
    # the interval endpoints matter for maximal (drop) steps
    candidates = [(phi(lo), lo), (fc, c), (fd, d), (phi(mid), mid), (phi(hi), hi)]
    return min(candidates)[1]


def choose_step(rule, objective, x, d, eta_max, t):
    """Step size in [0, eta_max] for direction d at iterate x."""
    if eta_max <= 0:
        raise ValueError("eta_max must be positive")
    if rule.kind == "open-loop":
        return min(rule.ell / (t + rule.ell), eta_max)
    if rule.kind == "fixed":
        return min(max(rule.eta, 0.0), eta_max)
    g = objective.gradient(x)
    slope = float(g @ d)
    if rule.kind == "short-step":
        if objective.L is None:
            raise MissingConstant("short-step requires a smoothness constant")
        dd = float(d @ d)
        if dd == 0.0 or slope >= 0.0:
            return 0.0
        return min(-slope / (objective.L * dd), eta_max)
    if rule.kind == "adaptive":
        dd = float(d @ d)
        if dd == 0.0 or slope >= 0.0:
            return 0.0
        fx = objective.value(x)
        Lk = rule.L_estimate * rule.shrink
        for _ in range(100):
            eta = min(-slope / (Lk * dd), eta_max)
            if objective.value(x + eta * d) <= fx + eta * slope + 0.5 * Lk * eta**2 * dd:
                break
            Lk *= rule.growth
        rule.L_estimate = Lk
        return eta
    # line-search
    if slope >= 0.0:
        return 0.0
    eta = objective.exact_step(x, d, eta_max)
    if eta is not None:
        return eta
    return golden_section(lambda e: objective.value(x + e * d), 0.0, eta_max)
