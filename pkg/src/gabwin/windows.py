"""Test-window generators: periodized Gaussian, hyperbolic secant, and the
frame-breaking MONSTER window.

The Gaussian and sech windows are sampled at l / sqrt(L) and periodized
with period sqrt(L); both families are unit-norm and map to themselves
under the unitary DFT with w -> 1/w.
"""

from __future__ import annotations

import numpy as np

from .dense import synthesis_matrix
from .errors import NotAFrameError
from .lattice import GaborLattice

__all__ = ["gaussian_window", "sech_window", "monster_window"]

_TAIL = 1e-20


def _periodize(L: int, w: float, term) -> np.ndarray:
    """Sum term(t_l - k sqrt(L)) over k until the next shell drops below
    the truncation tail (terms decay at least exponentially)."""
    t = np.arange(L) / np.sqrt(L)
    total = term(t, w)
    k = 1
    while True:
        shell = term(t - k * np.sqrt(L), w) + term(t + k * np.sqrt(L), w)
        if shell.max() < _TAIL:
            break
        total += shell
        k += 1
    return total


def gaussian_window(L: int, w: float = 1.0) -> np.ndarray:
    """Sampled-periodized dilated Gaussian, unit norm, even about sample 0."""
    if w <= 0:
        raise ValueError("width w must be positive")
    vals = _periodize(L, w, lambda t, w: np.exp(-np.pi * t * t / w))
    return (w * L / 2.0) ** (-0.25) * vals


def _sech(x: np.ndarray) -> np.ndarray:
    # 2 e^{-|x|} / (1 + e^{-2|x|}) avoids cosh overflow
    ax = np.abs(x)
    e = np.exp(-ax)
    return 2.0 * e / (1.0 + e * e)


def sech_window(L: int, w: float = 1.0) -> np.ndarray:
    """Sampled-periodized dilated hyperbolic secant, unit norm, even."""
    if w <= 0:
        raise ValueError("width w must be positive")
    vals = _periodize(L, w, lambda t, w: _sech(np.pi * t / np.sqrt(w)))
    return np.sqrt(np.pi / 2.0) * (w * L) ** (-0.25) * vals


def _reflect(u: np.ndarray) -> np.ndarray:
    return u[(-np.arange(len(u))) % len(u)]


def _remove_phase(u: np.ndarray) -> np.ndarray:
    s = np.sum(u * u)
    if np.abs(s) < 1e-14:
        return u
    return u * np.exp(-0.5j * np.angle(s))


def _symmetry_score(v: np.ndarray) -> float:
    return 1.0 - np.linalg.norm(v - _reflect(v)) / np.linalg.norm(v)


def monster_window(lattice: GaborLattice, sigma_real: float = 6.0) -> np.ndarray:
    """Gaussian with one symmetric-eigenvector singular value inflated.

    Picks the frame-operator eigenvector (or, for a degenerate eigenvalue,
    the normalized projection of the Gaussian onto the eigenspace) that is
    real and even with the largest eigenvalue, and modifies the window so
    that the corresponding synthesis-matrix singular value becomes exactly
    ``sigma_real`` while all others are untouched.  Note every eigenvalue
    of a frame operator on this lattice has multiplicity >= q, so the
    modification applies to the whole eigengroup.
    """
    g = gaussian_window(lattice.L).astype(complex)
    S = synthesis_matrix(g, lattice).frame_operator()
    lam, vecs = np.linalg.eigh(S)
    if lam.min() <= 1e-13 * lam.max():
        raise NotAFrameError("Gaussian system on this lattice is not a frame")

    # group numerically equal eigenvalues (relative tolerance 1e-10)
    groups = []
    start = 0
    for i in range(1, lattice.L + 1):
        if i == lattice.L or lam[i] - lam[i - 1] > 1e-10 * lam[-1]:
            groups.append((start, i))
            start = i

    chosen = None
    for i0, i1 in groups:
        if i1 - i0 == 1:
            v = _remove_phase(vecs[:, i0])
        else:
            proj = vecs[:, i0:i1] @ (vecs[:, i0:i1].conj().T @ g)
            nrm = np.linalg.norm(proj)
            if nrm < 1e-8:
                continue
            v = _remove_phase(proj / nrm)
        if _symmetry_score(v) > 0.99 and (chosen is None or lam[i1 - 1] > chosen[0]):
            chosen = (lam[i1 - 1], v)

    if chosen is None:
        raise ValueError("no sufficiently real and symmetric eigenvector found")

    eigval, v = chosen
    v = np.real(v)
    v /= np.linalg.norm(v)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    sigma_j = np.sqrt(eigval)
    lam_coef = sigma_real / sigma_j - 1.0
    return np.real(g + lam_coef * np.dot(v, np.real(g)) * v)
