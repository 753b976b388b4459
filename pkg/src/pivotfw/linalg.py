"""Square-system solving for the (n+2) x (n+2) pivot basis matrix.

The basis matrix is refactorized from scratch whenever a column is
replaced; rank-one LU updates lose too much accuracy for the weight
recovery this matrix supports, so the update entry point exists but
delegates to a full refactorization.
"""

import numpy as np
import scipy.linalg

# Pivot floor relative to the largest column norm; a smallest LU pivot
# below this is treated as numerically singular.
EPS_SINGULAR = 1e-12
# Residual bound for solve: ||M r - b||_inf <= EPS_SOLVE * (1 + ||b||_inf).
EPS_SOLVE = 1e-10


class SingularMatrix(Exception):
    """The basis matrix is numerically rank deficient."""


class StaleFactorization(Exception):
    """A column was edited in place without refreshing the factorization."""


class Factorization:
    """LU decomposition handle with a staleness flag.

    Single-writer: do not share one instance across threads that solve
    concurrently with column edits.
    """

    def __init__(self, lu, piv, order):
        self._lu = lu
        self._piv = piv
        self.order = order
        self.stale = False

    def mark_stale(self):
        self.stale = True


def factor(A):
    """LU-factor a square matrix, raising SingularMatrix if degenerate."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("factor expects a square matrix")
    order = A.shape[0]
    col_norms = np.linalg.norm(A, axis=0)
    floor = EPS_SINGULAR * max(float(col_norms.max()), 1e-300)
    with np.errstate(all="ignore"):
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    diag = np.abs(np.diag(lu))
    if not np.all(np.isfinite(lu)) or diag.min() <= floor:
        raise SingularMatrix(
            f"smallest pivot {diag.min():.3e} below floor {floor:.3e}"
        )
    return Factorization(lu, piv, order)


def solve(F, b):
    """Solve M r = b for the matrix captured by the factorization."""
    if F.stale:
        raise StaleFactorization("column replaced without refactorization")
    b = np.asarray(b, dtype=float)
    if b.shape != (F.order,):
        raise ValueError(f"right-hand side must have length {F.order}")
    return scipy.linalg.lu_solve((F._lu, F._piv), b, check_finite=False)


def replace_column(A, F, index, col):
    """Replace column `index` of A in place and return a fresh factorization.

    The old factorization is invalidated. Refactors from scratch; see
    module docstring for why rank-one updates are not used.
    """
    col = np.asarray(col, dtype=float)
    if col.shape != (A.shape[0],):
        raise ValueError("replacement column has wrong length")
    A[:, index] = col
    if F is not None:
        F.mark_stale()
    return factor(A)


def reconstruction_residual(M, lam, x_ext):
    """Max-norm residual ||M lam - x_ext||_inf of the weight system."""
    return float(np.max(np.abs(M @ lam - x_ext)))
