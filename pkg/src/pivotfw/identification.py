"""Face identification diagnostics on the probability simplex.

Multipliers lambda_i(x) = <grad f(x), e_i - x> drive everything here:
the coordinates with zero multiplier at the optimum span the optimal
face, and the remaining coordinates split per iterate into those already
at zero and those still to be cleared.
"""

from dataclasses import dataclass

import numpy as np

# Multipliers above this at the reference optimum count as strictly
# positive; values between the zero band and this bound are ambiguous.
COMPLEMENTARITY_TOL = 1e-9
ZERO_BAND = 1e-12


class DegenerateOptimum(Exception):
    """Strict complementarity is ambiguous at the reference optimum."""


@dataclass
class MultiplierReport:
    lambdas: np.ndarray  # multipliers at the current iterate
    lambdas_star: np.ndarray  # multipliers at the reference optimum
    I: frozenset  # zero-multiplier coordinates at the optimum
    I_c: frozenset
    O_t: frozenset  # I_c coordinates already zero in the iterate
    J_t: frozenset  # I_c coordinates still positive in the iterate
    delta_t: float
    delta_min: float
    h_star: float
    identification_trivial: bool


def multipliers(objective, x):
    """Per-coordinate multipliers lambda_i(x) on the simplex."""
    g = objective.gradient(x)
    return g - float(g @ x)


def partition_report(objective, x_star, x_t, L):
    """Index partitions and thresholds relative to a stationary point."""
    x_star = np.asarray(x_star, dtype=float)
    x_t = np.asarray(x_t, dtype=float)
    lam_star = multipliers(objective, x_star)
    n = len(x_star)
    scale = max(1.0, float(np.max(np.abs(lam_star))))
    ambiguous = (lam_star > ZERO_BAND * scale) & (lam_star < COMPLEMENTARITY_TOL)
    if np.any(ambiguous):
        raise DegenerateOptimum(
            f"multipliers {np.nonzero(ambiguous)[0].tolist()} are neither zero "
            "nor clearly positive"
        )
    I = frozenset(int(i) for i in np.nonzero(lam_star <= COMPLEMENTARITY_TOL)[0])
    I_c = frozenset(range(n)) - I
    O_t = frozenset(i for i in I_c if abs(x_t[i]) <= ZERO_BAND)
    J_t = I_c - O_t
    if I_c:
        delta_min = float(min(lam_star[i] for i in I_c))
        outside_O = [i for i in range(n) if i not in O_t]
        delta_t = float(max(lam_star[i] for i in outside_O)) if outside_O else 0.0
        delta_t = max(delta_t, 0.0)
        h_star = delta_min / (3.0 * L + max(delta_t, delta_min))
    else:
        delta_min = float("inf")
        delta_t = 0.0
        h_star = float("inf")
    return MultiplierReport(
        lambdas=multipliers(objective, x_t),
        lambdas_star=lam_star,
        I=I,
        I_c=I_c,
        O_t=O_t,
        J_t=J_t,
        delta_t=delta_t,
        delta_min=delta_min,
        h_star=h_star,
        identification_trivial=not I_c,
    )


@dataclass
class IdentificationSummary:
    achieved: bool
    R: int | None
    max_size_after_R: int | None


def identification_monitor(trajectory, region, face_spec):
    """Earliest iteration after which the active set stays in the face.

    `face_spec` is the coordinate support of the face; for the simplex a
    support vertex e_i lies in the face iff i is in the spec. Reports
    the maximum active set size from that iteration on.
    """
    face = frozenset(int(i) for i in face_spec)
    contained = [
        all(set(sup) <= face for sup in supports)
        for supports in trajectory.supports
    ]
    R = None
    for t in range(len(contained) - 1, -1, -1):
        if not contained[t]:
            break
        R = t
    if R is None:
        return IdentificationSummary(False, None, None)
    max_size = max(len(supports) for supports in trajectory.supports[R:])
    return IdentificationSummary(True, R, max_size)
