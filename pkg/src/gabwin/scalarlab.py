"""Zak-domain scalar laboratory: pointwise and two-valued recursions with
analytically known convergence and divergence thresholds.

On a critically sampled system the block factorization collapses to
scalars, so the tight and dual iterations become pointwise maps of the Zak
transform value.  The two-valued variant (value 1 on a set of measure
1 - eps, value x on a set of measure eps) makes the norm-scaled maps fully
explicit and exhibits the thresholds x = sqrt(3), sqrt(5) (tight) and
sqrt(2) (dual).
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "Classification",
    "pointwise_tight",
    "pointwise_dual",
    "two_point_norm_scaled",
]


def pointwise_tight(gamma0: complex, steps: int) -> np.ndarray:
    """Iterate G -> 3/2 G - 1/2 |G|^2 G (initial-scaled tight map).

    Converges to exp(i arg gamma0) iff |gamma0|^2 < 3; unbounded beyond 5.
    """
    out = np.empty(steps + 1, dtype=complex)
    out[0] = g = np.complex128(gamma0)
    for k in range(steps):
        g = 1.5 * g - 0.5 * (g.real**2 + g.imag**2) * g
        if not np.isfinite(g) or abs(g) > 1e12:
            out[k + 1:] = g
            break
        out[k + 1] = g
    return out


def pointwise_dual(gamma0: complex, G: complex, steps: int) -> np.ndarray:
    """Iterate Gam -> 2 Gam - |Gam|^2 G (initial-scaled dual map).

    Converges to 1/conj(G) iff |G|^2 < 2.
    """
    out = np.empty(steps + 1, dtype=complex)
    out[0] = gam = np.complex128(gamma0)
    G = np.complex128(G)
    for k in range(steps):
        gam = 2.0 * gam - (gam.real**2 + gam.imag**2) * G
        if not np.isfinite(gam) or abs(gam) > 1e12:
            out[k + 1:] = gam
            break
        out[k + 1] = gam
    return out


class Classification(str, enum.Enum):
    BOTH_TO_ONE = "both_to_one"
    SIGN_FLIP = "sign_flip"
    INVERSE_LIMIT = "inverse_limit"
    NEGATIVE_D = "negative_d"
    CHAOTIC = "chaotic"
    UNBOUNDED = "unbounded"


def _two_point_step_tight(c: float, d: float, eps: float):
    n1 = np.sqrt((1 - eps) * c**2 + eps * d**2)
    n3 = np.sqrt((1 - eps) * c**6 + eps * d**6)
    return 1.5 * c / n1 - 0.5 * c**3 / n3, 1.5 * d / n1 - 0.5 * d**3 / n3


def _two_point_step_dual(c: float, d: float, x: float, eps: float):
    n1 = np.sqrt((1 - eps) * c**2 + eps * d**2)
    n2 = np.sqrt((1 - eps) * c**4 + eps * d**4 * x**2)
    return 2 * c / n1 - c**2 / n2, 2 * d / n1 - d**2 * x / n2


def two_point_norm_scaled(x: float, eps: float, algo: str = "II",
                          steps: int = 500) -> Classification:
    """Classify the limit of the norm-scaled two-valued recursion.

    Starts from the Zak values (c, d) = (1, x).  Thresholds for eps << 1:
    algo II converges (both values to 1) for x < sqrt(3), flips the sign of
    d on (sqrt(3), sqrt(5)) and is chaotic beyond sqrt(5); algo IV reaches
    (1, 1/x) for x < sqrt(2) and drives d negative beyond.
    """
    if algo not in ("II", "IV"):
        raise ValueError(f"unknown two-point algorithm {algo!r}")
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    c, d = 1.0, float(x)
    hist = np.empty((steps + 1, 2))
    hist[0] = c, d
    for k in range(steps):
        if algo == "II":
            c, d = _two_point_step_tight(c, d, eps)
        else:
            c, d = _two_point_step_dual(c, d, x, eps)
        if not np.isfinite(c) or not np.isfinite(d) or max(abs(c), abs(d)) > 1e12:
            return Classification.UNBOUNDED
        hist[k + 1] = c, d

    # the analytic limits hold as eps -> 0; the actual fixed points sit
    # O(eps) away from them, hence the coarse tolerance
    tail = hist[-50:]
    tol = 0.05
    settled = np.abs(tail - tail[-1]).max() < 1e-3
    if settled and abs(c - 1) < tol:
        if algo == "IV" and abs(d - 1 / x) < tol:
            return Classification.INVERSE_LIMIT
        if abs(d - 1) < tol:
            return Classification.BOTH_TO_ONE
        if abs(d + 1) < tol:
            return Classification.SIGN_FLIP
    if (tail[:, 1] < 0).all():
        return Classification.NEGATIVE_D
    # bounded non-convergence; past sqrt(5) the norm scaling settles into a
    # large-amplitude sign-alternating oscillation
    return Classification.CHAOTIC
