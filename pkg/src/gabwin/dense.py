"""Dense synthesis-operator oracle and the scalar singular-value view.

The synthesis matrix O_g holds all lattice shifts of g as columns; its
SVD gives ground-truth canonical windows (polar decomposition and
pseudo-inverse), and every iteration acts as a scalar recursion on its
singular values.  Dense work is guarded to L <= 2048; the block path has
no such limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAFrameError
from .iterations import (
    IterationConfig,
    dual_taylor_coeffs,
    optimal_scaling_constant,
    tight_taylor_coeffs,
)
from .lattice import GaborLattice, tf_shift

__all__ = [
    "DENSE_SIZE_GUARD",
    "SynthesisMatrix",
    "synthesis_matrix",
    "reference_tight",
    "reference_dual",
    "normalized_singular_values",
    "scalar_iteration",
]

DENSE_SIZE_GUARD = 2048
_RANK_TOL = 1e-13


@dataclass(frozen=True)
class SynthesisMatrix:
    """Dense L x (M N) synthesis operator; column m + n*M is the shift of
    g by (n*a, m*b)."""

    lattice: GaborLattice
    entries: np.ndarray

    def frame_operator(self) -> np.ndarray:
        return self.entries @ self.entries.conj().T


def synthesis_matrix(g: np.ndarray, lattice: GaborLattice) -> SynthesisMatrix:
    if lattice.L > DENSE_SIZE_GUARD:
        raise ValueError(
            f"dense size guard exceeded: L={lattice.L} > {DENSE_SIZE_GUARD}"
        )
    g = np.asarray(g, dtype=complex)
    if len(g) != lattice.L:
        raise ValueError("signal length does not match lattice")
    lt = lattice
    cols = np.arange(lt.M * lt.N)
    m, n = cols % lt.M, cols // lt.M
    l = np.arange(lt.L)[:, None]
    entries = np.exp(2j * np.pi * l * (m * lt.b)[None, :] / lt.L) \
        * g[(l - (n * lt.a)[None, :]) % lt.L]
    return SynthesisMatrix(lattice=lt, entries=entries)


def _thin_svd(g: np.ndarray, lattice: GaborLattice):
    O = synthesis_matrix(g, lattice).entries
    U, s, Vh = np.linalg.svd(O, full_matrices=False)
    if s.min() < _RANK_TOL * s.max():
        raise NotAFrameError("numerically not a frame")
    return U, s, Vh


def reference_tight(g: np.ndarray, lattice: GaborLattice) -> np.ndarray:
    """Ground-truth canonical tight window from the dense polar part U V*
    (the zero-shift column of the tight synthesis matrix is the window)."""
    U, _, Vh = _thin_svd(g, lattice)
    return (U @ Vh)[:, 0]


def reference_dual(g: np.ndarray, lattice: GaborLattice) -> np.ndarray:
    """Ground-truth canonical dual window (O_g O_g*)^(-1) g via the SVD."""
    U, s, _ = _thin_svd(g, lattice)
    return U @ ((U.conj().T @ np.asarray(g, dtype=complex)) / s**2)


def normalized_singular_values(g: np.ndarray, lattice: GaborLattice) -> np.ndarray:
    """Singular values of the unit-column synthesis matrix, sigma / sqrt(MN).

    In these units the norm-scaled scalar recursion tracks the full block
    iteration step for step.
    """
    O = synthesis_matrix(g, lattice).entries
    return np.linalg.svd(O, compute_uv=False) / np.sqrt(lattice.M * lattice.N)


def _vec_norm(x: np.ndarray) -> float:
    return np.sqrt((x * x).sum())


def scalar_iteration(sigmas: np.ndarray, config: IterationConfig,
                     steps: int | None = None) -> np.ndarray:
    """Run an iteration as a scalar recursion on singular values.

    Returns the (steps+1, n) trace of sigma vectors.  Norm scaling is
    scale-invariant in the input; for initial scaling pass raw singular
    values (so sigma^2 is the frame-operator spectrum) and the configured
    Bhat prescale is applied once.  Computations stay in the input dtype,
    so longdouble input gives an extended-precision trace.
    """
    sig = np.array(sigmas, copy=True)
    dtype = sig.dtype
    steps = config.max_steps if steps is None else steps

    if config.scaling == "initial":
        if config.Bhat is None:
            raise ValueError("initial scaling of a scalar run needs an explicit Bhat")
        sig = sig / np.sqrt(dtype.type(config.Bhat))
    elif config.scaling == "initial_optimal":
        lo, hi = float((sig**2).min()), float((sig**2).max())
        sig = sig / np.sqrt(dtype.type(
            optimal_scaling_constant(lo, hi, config.algorithm_name)))

    sig0 = sig.copy()
    coeffs = None
    if not config.inverse:
        raw = (tight_taylor_coeffs(config.order) if config.target == "tight"
               else dual_taylor_coeffs(config.order))
        coeffs = raw.astype(dtype)

    norm_scaled = config.scaling == "norm"
    trace = [sig.copy()]
    for _ in range(steps):
        if config.scaling == "constant_optimal":
            if config.target == "tight":
                lo, hi = float((sig**2).min()), float((sig**2).max())
                const = optimal_scaling_constant(lo, hi, config.algorithm_name)
                sig = sig / np.sqrt(dtype.type(const))
            else:
                z = sig0 * sig
                const = optimal_scaling_constant(float(np.abs(z).min()),
                                                 float(np.abs(z).max()),
                                                 config.algorithm_name)
                sig = sig / dtype.type(const)

        with np.errstate(over="ignore", invalid="ignore"):
            if config.inverse:
                t0, t1 = sig, 1.0 / sig
                sig = 0.5 * t0 / _vec_norm(t0) + 0.5 * t1 / _vec_norm(t1)
            elif config.target == "tight":
                terms = [sig]
                for _j in range(config.order - 1):
                    terms.append(terms[-1] * sig * sig)
                if norm_scaled:
                    sig = sum(cf * T / _vec_norm(T) for cf, T in zip(coeffs, terms))
                else:
                    sig = sum(cf * T for cf, T in zip(coeffs, terms))
            else:
                zfac = sig0 * sig
                terms = [sig, sig * zfac]
                while len(terms) < config.order:
                    terms.append(terms[-2] * zfac * zfac)
                if norm_scaled:
                    sig = sum(cf * T / _vec_norm(T) for cf, T in zip(coeffs, terms))
                else:
                    sig = sum(cf * T for cf, T in zip(coeffs, terms))
        if not np.isfinite(sig).all():
            # diverged; freeze the trace at the last finite iterand
            trace.extend(trace[-1].copy() for _ in range(steps - len(trace) + 1))
            break
        trace.append(sig.copy())
    return np.array(trace)
