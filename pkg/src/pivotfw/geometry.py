"""Feasible regions, their vertices and linear minimization oracles.

Vertices are stored sparsely and carry a canonical identity key so that
equality across iterations is exact, which the pivot bookkeeping relies
on. The extended embedding x -> (x, 0, 1) appends two rows used by the
basis matrix: row n+1 is 0 for embedded vertices and 1 for the
structural columns, which is the test distinguishing the two.
"""

import hashlib
import itertools

import numpy as np


class Vertex:
    """Sparse coordinate vector with a canonical identity key."""

    __slots__ = ("dim", "indices", "values", "key")

    def __init__(self, dim, indices, values):
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=float)
        order = np.argsort(indices, kind="stable")
        indices = indices[order]
        values = values[order]
        keep = values != 0.0
        self.dim = int(dim)
        self.indices = indices[keep]
        self.values = values[keep]
        h = hashlib.blake2b(digest_size=16)
        h.update(self.dim.to_bytes(8, "little"))
        h.update(self.indices.tobytes())
        h.update(self.values.tobytes())
        self.key = h.hexdigest()

    @classmethod
    def from_dense(cls, x):
        x = np.asarray(x, dtype=float)
        idx = np.nonzero(x)[0]
        return cls(len(x), idx, x[idx])

    def dense(self):
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def extended(self):
        """(v, 0, 1) embedding used for basis-matrix columns."""
        out = np.zeros(self.dim + 2)
        out[self.indices] = self.values
        out[self.dim + 1] = 1.0
        return out

    def dot(self, c):
        return float(c[self.indices] @ self.values)

    def support(self):
        return tuple(int(i) for i in self.indices)

    def __eq__(self, other):
        return isinstance(other, Vertex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        pairs = ", ".join(f"{i}:{v:g}" for i, v in zip(self.indices, self.values))
        return f"Vertex({self.dim}, {{{pairs}}})"


def extend(x):
    """Append (0, 1) to a length-n vector."""
    x = np.asarray(x, dtype=float)
    return np.concatenate([x, [0.0, 1.0]])


def dn_columns(n):
    """The n+1 structural columns: [e_i; 1; 1] for i < n and [0; 1; 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cols = []
    for i in range(n):
        c = np.zeros(n + 2)
        c[i] = 1.0
        c[n] = 1.0
        c[n + 1] = 1.0
        cols.append(c)
    last = np.zeros(n + 2)
    last[n] = 1.0
    last[n + 1] = 1.0
    cols.append(last)
    return cols


class Simplex:
    """Probability simplex in R^n."""

    kind = "simplex"

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.ambient_dim = n
        self.dim = n - 1
        self.diameter = float(np.sqrt(2.0)) if n > 1 else 0.0

    def lmo(self, c):
        i = int(np.argmin(c))  # argmin breaks ties at the lowest index
        return Vertex(self.ambient_dim, [i], [1.0])

    def vertices(self):
        for i in range(self.ambient_dim):
            yield Vertex(self.ambient_dim, [i], [1.0])

    def initial_vertex(self):
        return Vertex(self.ambient_dim, [0], [1.0])

    def contains(self, x, tol=1e-9):
        return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol)

    def project(self, x):
        from .pivot import project_simplex

        return project_simplex(x)


class L1Ball:
    """Scaled l1 ball, vertices +-tau e_i."""

    kind = "l1"

    def __init__(self, n, tau):
        if n < 1 or tau <= 0:
            raise ValueError("need n >= 1 and tau > 0")
        self.ambient_dim = n
        self.tau = float(tau)
        self.dim = n
        self.diameter = 2.0 * self.tau

    def lmo(self, c):
        c = np.asarray(c, dtype=float)
        i = int(np.argmax(np.abs(c)))
        # sign chosen to minimize <c, v>; c_i == 0 matches the first
        # vertex in enumeration order (negative before positive)
        val = -self.tau if c[i] >= 0 else self.tau
        return Vertex(self.ambient_dim, [i], [val])

    def vertices(self):
        for i in range(self.ambient_dim):
            yield Vertex(self.ambient_dim, [i], [-self.tau])
            yield Vertex(self.ambient_dim, [i], [self.tau])

    def initial_vertex(self):
        return Vertex(self.ambient_dim, [0], [self.tau])

    def contains(self, x, tol=1e-9):
        return bool(np.abs(x).sum() <= self.tau + tol)

    def project(self, x):
        x = np.asarray(x, dtype=float)
        if np.abs(x).sum() <= self.tau:
            return x.copy()
        from .pivot import project_simplex

        mag = project_simplex(np.abs(x) / self.tau) * self.tau
        return np.sign(x) * mag


class KSparsePolytope:
    """Intersection of the tau*K l1 ball and the tau l-inf ball.

    Vertices have exactly min(K, n) nonzeros of magnitude tau.
    """

    kind = "ksparse"

    def __init__(self, n, k, tau):
        if n < 1 or not (1 <= k <= n) or tau <= 0:
            raise ValueError("need n >= 1, 1 <= k <= n, tau > 0")
        self.ambient_dim = n
        self.k = int(k)
        self.tau = float(tau)
        self.dim = n
        self.diameter = 2.0 * self.tau * float(np.sqrt(self.k))

    def lmo(self, c):
        c = np.asarray(c, dtype=float)
        # top-k |c_i|, ties resolved at the lowest index by stable sort
        order = np.argsort(-np.abs(c), kind="stable")[: self.k]
        support = np.sort(order)
        vals = np.where(c[support] >= 0, -self.tau, self.tau)
        return Vertex(self.ambient_dim, support, vals)

    def vertices(self):
        for support in itertools.combinations(range(self.ambient_dim), self.k):
            for signs in itertools.product((-self.tau, self.tau), repeat=self.k):
                yield Vertex(self.ambient_dim, support, signs)

    def initial_vertex(self):
        return Vertex(self.ambient_dim, range(self.k), [self.tau] * self.k)

    def contains(self, x, tol=1e-9):
        return bool(
            np.abs(x).sum() <= self.k * self.tau + tol
            and np.abs(x).max(initial=0.0) <= self.tau + tol
        )


def _parse_kv(body):
    params = {}
    for part in body.split(","):
        if "=" not in part:
            raise ValueError(f"malformed parameter {part!r}")
        k, v = part.split("=", 1)
        params[k.strip()] = v.strip()
    return params


def parse_region(spec):
    """Build a region from a spec string such as ``l1:n=140,tau=2.5``."""
    if ":" not in spec:
        raise ValueError(f"malformed region spec {spec!r}")
    kind, body = spec.split(":", 1)
    params = _parse_kv(body)
    try:
        if kind == "simplex":
            return Simplex(int(params["n"]))
        if kind == "l1":
            return L1Ball(int(params["n"]), float(params["tau"]))
        if kind == "ksparse":
            return KSparsePolytope(
                int(params["n"]), int(params["k"]), float(params["tau"])
            )
    except KeyError as exc:
        raise ValueError(f"region spec {spec!r} missing parameter {exc}") from exc
    raise ValueError(f"unknown region kind {kind!r}")
