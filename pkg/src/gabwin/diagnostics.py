"""Error measures: adjoint-lattice correlations, dual lattice norms,
Wexler-Raz residual, Kantorovich-type window bounds, Z-operator bounds,
and convergence-order estimation.

The adjoint lattice of (a, b) on C^L consists of the shifts
(j * L/b, l * L/a), j in [0, b), l in [0, a).  All correlation sums carry
the constant L/(a*b) of the dual lattice representation of frame-type
operators, calibrated so that the Wexler-Raz diagonal is exactly 1 and a
canonical tight window has upper-bound estimate exactly 1.
"""

from __future__ import annotations

import warnings

import numpy as np

from .lattice import GaborLattice
from .zak import SpectralSummary, ZakFactorization

__all__ = [
    "adjoint_correlations",
    "dual_lattice_norm_tight",
    "dual_lattice_norm_dual",
    "wexler_raz_residual",
    "kantorovich_bound_tight",
    "kantorovich_bound_dual",
    "z_bounds",
    "convergence_order",
]


def adjoint_correlations(f: np.ndarray, h: np.ndarray, lattice: GaborLattice) -> np.ndarray:
    """Scaled inner products of f against adjoint-lattice shifts of h.

    Returns the (b, a) array  c[j, l] = (L/(a b)) <f, h_{j M, l N}>  with
    <u, v> = sum u conj(v).  Row j is computed with one length-L FFT.
    """
    lt = lattice
    f = np.asarray(f, dtype=complex)
    h = np.asarray(h, dtype=complex)
    scale = lt.L / (lt.a * lt.b)
    out = np.empty((lt.b, lt.a), dtype=complex)
    for j in range(lt.b):
        t = f * np.conj(np.roll(h, j * lt.M))
        out[j] = scale * np.fft.fft(t)[:: lt.N]
    return out


def dual_lattice_norm_tight(gamma: np.ndarray, lattice: GaborLattice) -> float:
    """Off-origin adjoint correlation mass of gamma against itself.

    Upper-bounds || S_gamma - (L/ab) ||gamma||^2 I || in operator norm and
    vanishes exactly at canonical tight windows (Wexler-Raz).
    """
    c = np.abs(adjoint_correlations(gamma, gamma, lattice))
    return float(c.sum() - c[0, 0])


def dual_lattice_norm_dual(g: np.ndarray, gamma: np.ndarray, lattice: GaborLattice) -> float:
    """Off-origin cross-correlation mass of (g, gamma) on the adjoint lattice.

    Upper-bounds || Z - (L/ab) (g, gamma) I || and vanishes at the
    canonical dual pair.
    """
    c = np.abs(adjoint_correlations(g, gamma, lattice))
    return float(c.sum() - c[0, 0])


def wexler_raz_residual(g: np.ndarray, gamma: np.ndarray, lattice: GaborLattice) -> float:
    """Max deviation of the scaled correlations from the biorthogonality
    pattern delta_{j0} delta_{l0} (diagonal constant 1 by calibration)."""
    c = adjoint_correlations(g, gamma, lattice)
    c[0, 0] -= 1.0
    return float(np.abs(c).max())


def kantorovich_bound_tight(Q: float) -> float:
    """Window-distance bound (1 - Q^(1/4)) sqrt(2/(1+Q)) for Q = A/B."""
    return (1.0 - Q ** 0.25) * np.sqrt(2.0 / (1.0 + Q))


def kantorovich_bound_dual(R: float) -> float:
    """Window-distance bound (1 - R^(1/2)) sqrt(2/(1+R)) for R = E/F."""
    return (1.0 - R ** 0.5) * np.sqrt(2.0 / (1.0 + R))


def z_bounds(fac_g: ZakFactorization, fac_gamma: ZakFactorization) -> SpectralSummary:
    """Extremal spectrum of the operator Z = (S S_gamma)^(1/2).

    Z is represented blockwise by A^{g,gamma}; its eigenvalues are real when
    gamma lies in the functional-calculus orbit of g, which is checked: a
    warning is issued when |imag| / |eig| exceeds 1e-6.  Bounds are min/max
    eigenvalue modulus, so z_bounds(G, G) equals frame_bounds and the exact
    canonical dual gives (1, 1).
    """
    if fac_g.lattice != fac_gamma.lattice:
        raise ValueError("lattice mismatch")
    lt = fac_g.lattice
    blocks = lt.c * lt.d * lt.q * np.einsum(
        "rskl,rsml->rskm", fac_g.blocks, fac_gamma.blocks.conj()
    )
    ev = np.linalg.eigvals(blocks)
    mod = np.abs(ev)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(mod > 0, np.abs(ev.imag) / np.maximum(mod, 1e-300), 0.0)
    max_ratio = float(ratios.max())
    if max_ratio > 1e-6:
        warnings.warn(
            f"Z-operator blocks have complex spectrum (imag ratio {max_ratio:.2e}); "
            "iterand has left the functional-calculus orbit",
            stacklevel=2,
        )
    return SpectralSummary(lower=float(mod.min()), upper=float(mod.max()),
                           max_imag_ratio=max_ratio)


def convergence_order(errors, window=(1e-12, 1e-2)):
    """Least-squares slope of log e_{k+1} against log e_k.

    Only consecutive pairs with both errors inside ``window`` enter the fit
    (pre-asymptotic steps; floor values excluded).  Returns None when fewer
    than 2 pairs remain.
    """
    lo, hi = window
    errors = np.asarray(errors, dtype=float)
    pts = [
        (np.log(errors[k]), np.log(errors[k + 1]))
        for k in range(len(errors) - 1)
        if lo <= errors[k] <= hi and lo <= errors[k + 1] <= hi
    ]
    if len(pts) < 2:
        return None
    xs = np.array([x for x, _ in pts])
    ys = np.array([y for _, y in pts])
    dx = xs - xs.mean()
    return float((dx * (ys - ys.mean())).sum() / (dx * dx).sum())
