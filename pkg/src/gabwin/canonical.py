"""Direct (non-iterative) canonical-window methods on the block
factorization: EIG, SVD and INV."""

from __future__ import annotations

import numpy as np

from .errors import NotAFrameError
from .zak import BlockOperator, ZakFactorization, block_gram, hermitian_part

__all__ = ["eig_tight", "svd_tight", "inv_dual", "cholesky_solve_blocks"]

_RANK_TOL = 1e-13


def eig_tight(fac: ZakFactorization) -> ZakFactorization:
    """Canonical tight window via per-block eigendecomposition.

    Each frame-operator block A is diagonalized as U D U* and D^(-1/2) is
    applied: tight = U D^(-1/2) U* Phi.  Inverting small eigenvalues makes
    this method lose accuracy as B/A grows.
    """
    A = block_gram(fac, fac).blocks
    ev, U = np.linalg.eigh(hermitian_part(A))
    if ev.min() <= _RANK_TOL * ev.max():
        raise NotAFrameError("not a frame: nonpositive frame-operator eigenvalue")
    out = np.einsum("rsij,rsj,rskj,rskl->rsil", U, ev ** -0.5, U.conj(), fac.blocks)
    return ZakFactorization(fac.lattice, out)


def svd_tight(fac: ZakFactorization) -> ZakFactorization:
    """Canonical tight window via per-block thin SVD.

    Singular values are discarded (set to 1), so roundoff on small singular
    values never enters; depends only on the block column spaces.
    """
    lt = fac.lattice
    U, s, Vh = np.linalg.svd(fac.blocks, full_matrices=False)
    if s.min() <= _RANK_TOL * s.max():
        raise NotAFrameError("not a frame: rank-deficient factorization block")
    out = np.einsum("rsij,rsjl->rsil", U, Vh) / np.sqrt(lt.c * lt.d * lt.q)
    return ZakFactorization(lt, out)


def cholesky_solve_blocks(op_blocks: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve A X = B per block for Hermitian positive definite A
    (Cholesky factorization followed by two substitutions)."""
    try:
        low = np.linalg.cholesky(hermitian_part(op_blocks))
    except np.linalg.LinAlgError as exc:
        raise NotAFrameError(f"not a frame: {exc}") from exc
    y = np.linalg.solve(low, rhs)
    return np.linalg.solve(np.conj(np.swapaxes(low, -2, -1)), y)


def inv_dual(fac: ZakFactorization) -> ZakFactorization:
    """Canonical dual window: per-block Hermitian solve A X = Phi."""
    A = block_gram(fac, fac)
    ev = np.linalg.eigvalsh(hermitian_part(A.blocks))
    if ev.min() <= _RANK_TOL * ev.max():
        raise NotAFrameError("not a frame: frame operator numerically singular")
    return ZakFactorization(fac.lattice, cholesky_solve_blocks(A.blocks, fac.blocks))
