"""Finite discrete Zak transform and the block factorization of C^L.

The factorization maps a signal to a c x d grid of p x q complex matrices.
It is unitary (block Frobenius norm equals the signal 2-norm), and the
frame operator of (g, a, b) acts on it blockwise: with A = block_gram(G, G),
factorize(S f) = A @ factorize(f) block by block.  Eigenvalues of the A
blocks are exactly the frame-operator spectrum, which makes frame bounds a
batch of p x p Hermitian eigensolves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import GaborLattice

__all__ = [
    "ZakFactorization",
    "BlockOperator",
    "SpectralSummary",
    "dzt",
    "zak_extend",
    "factorize",
    "unfactorize",
    "block_gram",
    "apply_block_operator",
    "frame_bounds",
]


def dzt(h: np.ndarray, K: int) -> np.ndarray:
    """Finite discrete Zak transform on the fundamental domain.

    Returns the (K, L/K) grid
    (Z_K h)(r, s) = sqrt(K/L) * sum_l h(r - l K) exp(2 pi i s l K / L),
    computed as K inverse FFTs of length L/K.  Unitary onto the grid.
    """
    L = len(h)
    if K <= 0 or L % K != 0:
        raise ValueError(f"K={K} must divide the signal length L={L}")
    J = L // K
    idx = (np.arange(K)[:, None] - np.arange(J)[None, :] * K) % L
    return np.sqrt(K / L) * J * np.fft.ifft(np.asarray(h)[idx], axis=1)


def zak_extend(grid: np.ndarray, r, s) -> np.ndarray:
    """Evaluate a dzt grid at arbitrary integer (r, s) via quasi-periodicity.

    (Z_K h)(r + k K, s) = exp(2 pi i k s K / L) (Z_K h)(r, s), and the grid
    is L/K-periodic in s.  Accepts scalars or broadcastable index arrays.
    """
    K, J = grid.shape
    r = np.asarray(r)
    s = np.asarray(s)
    wraps = r // K
    phase = np.exp(2j * np.pi * wraps * s / J)
    return phase * grid[r % K, s % J]


@dataclass(frozen=True)
class ZakFactorization:
    """c x d grid of p x q blocks sampled from the Zak transform.

    ``blocks`` has shape (c, d, p, q); the map signal -> blocks is unitary.
    Immutable: the array is marked read-only after construction.
    """

    lattice: GaborLattice
    blocks: np.ndarray

    def __post_init__(self):
        lt = self.lattice
        if self.blocks.shape != (lt.c, lt.d, lt.p, lt.q):
            raise ValueError(
                f"blocks shape {self.blocks.shape} does not match lattice "
                f"({lt.c}, {lt.d}, {lt.p}, {lt.q})"
            )
        self.blocks.flags.writeable = False

    def norm(self) -> float:
        return float(np.linalg.norm(self.blocks))


@dataclass(frozen=True)
class BlockOperator:
    """c x d grid of p x p blocks representing an operator commuting with
    the lattice shifts (e.g. a frame operator)."""

    lattice: GaborLattice
    blocks: np.ndarray

    def __post_init__(self):
        lt = self.lattice
        if self.blocks.shape != (lt.c, lt.d, lt.p, lt.p):
            raise ValueError("blocks shape does not match lattice")
        self.blocks.flags.writeable = False


@dataclass(frozen=True)
class SpectralSummary:
    """Extremal spectral values of a block operator.

    ``lower``/``upper`` are the min/max over all blocks; for frame operators
    these are the best frame bounds (A, B), for the mixed dual-iteration
    operator they are the Z-bounds (E, F).
    """

    lower: float
    upper: float
    max_imag_ratio: float = field(default=0.0)

    @property
    def ratio(self) -> float:
        return self.upper / self.lower

    @property
    def is_frame(self) -> bool:
        return self.lower > 0.0


def _block_indices(lattice: GaborLattice):
    lt = lattice
    r = np.arange(lt.c)[:, None, None, None]
    s = np.arange(lt.d)[None, :, None, None]
    k = np.arange(lt.p)[None, None, :, None]
    l = np.arange(lt.q)[None, None, None, :]
    rr = r + k * lt.M
    ss = s + l * lt.d
    return rr, ss


def factorize(f: np.ndarray, lattice: GaborLattice) -> ZakFactorization:
    """Assemble the unitary block factorization of a length-L signal.

    Blocks are dzt(f, a) samples at (r + k M, s + l d) with the
    quasi-periodic extension applied in the first index.
    """
    f = np.asarray(f, dtype=complex)
    if len(f) != lattice.L:
        raise ValueError(f"signal length {len(f)} != L = {lattice.L}")
    grid = dzt(f, lattice.a)
    rr, ss = _block_indices(lattice)
    return ZakFactorization(lattice, zak_extend(grid, rr, ss))


def unfactorize(fac: ZakFactorization) -> np.ndarray:
    """Invert factorize (exact up to rounding)."""
    lt = fac.lattice
    rr, ss = _block_indices(lt)
    wraps = rr // lt.a
    grid = np.zeros((lt.a, lt.N), dtype=complex)
    grid[rr % lt.a, ss % lt.N] = np.exp(-2j * np.pi * wraps * ss / lt.N) * fac.blocks
    J = lt.N
    x = np.fft.fft(grid, axis=1) / (np.sqrt(lt.a / lt.L) * J)
    f = np.empty(lt.L, dtype=complex)
    idx = (np.arange(lt.a)[:, None] - np.arange(J)[None, :] * lt.a) % lt.L
    f[idx] = x
    return f


def _gram_blocks(X: np.ndarray, Y: np.ndarray, lattice: GaborLattice) -> np.ndarray:
    # cdq restores the frame-operator normalization on unitary factorizations
    return lattice.c * lattice.d * lattice.q * np.einsum(
        "rskl,rsml->rskm", X, Y.conj()
    )


def block_gram(fac_f: ZakFactorization, fac_h: ZakFactorization) -> BlockOperator:
    """Blockwise Gram products representing the frame-type operator S_{h,f}.

    block_gram(G, G) represents the frame operator of g:
    apply_block_operator(block_gram(G, G), F) == factorize(S f).
    """
    if fac_f.lattice != fac_h.lattice:
        raise ValueError("lattice mismatch")
    return BlockOperator(
        fac_f.lattice, _gram_blocks(fac_f.blocks, fac_h.blocks, fac_f.lattice)
    )


def apply_block_operator(op: BlockOperator, fac: ZakFactorization) -> ZakFactorization:
    """Blockwise matrix product: (A Phi)_{r,s} = A_{r,s} Phi_{r,s}."""
    if op.lattice != fac.lattice:
        raise ValueError("lattice mismatch")
    return ZakFactorization(
        fac.lattice, np.einsum("rskm,rsml->rskl", op.blocks, fac.blocks)
    )


def hermitian_part(blocks: np.ndarray) -> np.ndarray:
    return 0.5 * (blocks + np.conj(np.swapaxes(blocks, -2, -1)))


def frame_bounds(op: BlockOperator) -> SpectralSummary:
    """Best frame bounds (A, B) from the block eigenvalues.

    Blocks are symmetrized before the eigensolve; a nonpositive lower bound
    is reported through SpectralSummary.is_frame rather than raised.
    """
    ev = np.linalg.eigvalsh(hermitian_part(op.blocks))
    return SpectralSummary(lower=float(ev.min()), upper=float(ev.max()))
