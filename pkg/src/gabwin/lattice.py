"""Lattice parameter arithmetic and time-frequency shifts on C^L.

A Gabor system on C^L is generated by shifting a window g by multiples of
``a`` samples in time and ``b`` bins in frequency.  The derived integers
(M, N, c, d, p, q) control the block factorization used everywhere else:
L = N*a = M*b, c = gcd(a, M), d = gcd(b, N), p = a/c = b/d, q = M/c = N/d,
and L = c*d*p*q with gcd(p, q) = 1.  The density of the system is
a*b/L = p/q, so p <= q is required for a frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import InvalidLatticeError

__all__ = ["GaborLattice", "derive_lattice", "tf_shift"]


@dataclass(frozen=True)
class GaborLattice:
    L: int
    a: int
    b: int
    M: int
    N: int
    c: int
    d: int
    p: int
    q: int

    @property
    def redundancy(self) -> float:
        """Oversampling factor q/p = L/(a*b)."""
        return self.q / self.p

    @property
    def density(self) -> float:
        """Lattice density a*b/L = p/q."""
        return self.p / self.q

    @property
    def adjoint_time_step(self) -> int:
        """Time step L/b of the adjoint lattice."""
        return self.M

    @property
    def adjoint_freq_step(self) -> int:
        """Frequency step L/a of the adjoint lattice."""
        return self.N


def derive_lattice(L: int, a: int, b: int) -> GaborLattice:
    """Validate (L, a, b) and compute the derived block parameters."""
    if L <= 0 or a <= 0 or b <= 0:
        raise InvalidLatticeError("invalid lattice: L, a, b must be positive")
    if L % a != 0 or L % b != 0:
        raise InvalidLatticeError(
            f"invalid lattice: a={a} and b={b} must divide L={L}"
        )
    M, N = L // b, L // a
    c, d = gcd(a, M), gcd(b, N)
    p, q = a // c, M // c
    if p != b // d or q != N // d or c * d * p * q != L or gcd(p, q) != 1:
        raise InvalidLatticeError(f"invalid lattice: ({L}, {a}, {b})")
    if p > q:
        raise InvalidLatticeError(
            f"undersampled system cannot be a frame: p/q = {p}/{q} > 1"
        )
    return GaborLattice(L=L, a=a, b=b, M=M, N=N, c=c, d=d, p=p, q=q)


def tf_shift(g: np.ndarray, j: int, k: int) -> np.ndarray:
    """Time-frequency shift: (T g)(l) = exp(2 pi i k l / L) g(l - j mod L)."""
    L = len(g)
    phase = np.exp(2j * np.pi * k * np.arange(L) / L)
    return phase * np.roll(g, j)
