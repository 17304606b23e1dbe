import numpy as np
import pytest

import gabwin as gw
from gabwin.errors import NotAFrameError



@pytest.fixture(scope="module")
def fac432(lat432, gauss432):
    return gw.factorize(gauss432, lat432)


def test_eig_tight_frame_operator_is_identity(lat432, fac432):
    out = gw.eig_tight(fac432)
    A = gw.block_gram(out, out).blocks
    eye = np.broadcast_to(np.eye(lat432.p), A.shape)
    assert np.abs(A - eye).max() < 1e-8


def test_eig_tight_matches_dense_reference(lat432, fac432, ref_tight432):
    out = gw.unfactorize(gw.eig_tight(fac432))
    assert np.linalg.norm(out - ref_tight432) < 1e-8


def test_svd_tight_matches_eig(lat432, fac432):
    assert np.linalg.norm(
        gw.unfactorize(gw.svd_tight(fac432)) - gw.unfactorize(gw.eig_tight(fac432))
    ) < 1e-8


def test_svd_tight_fixed_on_tight(lat432, ref_tight432):
    fac = gw.factorize(ref_tight432, lat432)
    out = gw.svd_tight(fac)
    assert np.abs(out.blocks - fac.blocks).max() < 1e-12


def test_svd_tight_orbit_invariance(lat432, gauss432, fac432):
    # every window phi(S) g with positive phi shares the tight window, and
    # svd_tight must map the whole orbit to the same output
    S = gw.synthesis_matrix(gauss432, lat432).frame_operator()
    w = 1.5 * gauss432 - 0.5 * (S @ gauss432)  # phi(s) = 3/2 - s/2 > 0 here
    a = gw.unfactorize(gw.svd_tight(fac432))
    b = gw.unfactorize(gw.svd_tight(gw.factorize(w, lat432)))
    assert np.linalg.norm(a - b) < 1e-10


def test_inv_dual_wexler_raz(lat432, gauss432, fac432):
    gd = gw.unfactorize(gw.inv_dual(fac432))
    assert gw.wexler_raz_residual(gauss432, gd, lat432) < 1e-10


def test_inv_dual_fixed_on_tight(lat432, ref_tight432):
    fac = gw.factorize(ref_tight432, lat432)
    out = gw.unfactorize(gw.inv_dual(fac))
    assert np.linalg.norm(out - ref_tight432) < 1e-12


def test_inv_dual_matches_dense_reference(lat432, fac432, ref_dual432):
    gd = gw.unfactorize(gw.inv_dual(fac432))
    assert np.linalg.norm(gd - ref_dual432) < 1e-9


def test_direct_methods_reject_non_frame():
    lt = gw.derive_lattice(16, 4, 4)
    delta = np.zeros(16, dtype=complex)
    delta[0] = 1.0
    fac = gw.factorize(delta, lt)
    for fn in (gw.eig_tight, gw.svd_tight, gw.inv_dual):
        with pytest.raises(NotAFrameError, match="not a frame"):
            fn(fac)


def test_eig_degrades_svd_does_not(lat432):
    # eigenvalue inversion amplifies roundoff roughly like B/A * eps, the
    # SVD method never touches the singular values: the gap opens with B/A
    def dln_of(method, w):
        g = gw.gaussian_window(432, w).astype(complex)
        fac = gw.factorize(g, lat432)
        out = gw.unfactorize(method(fac))
        return gw.dual_lattice_norm_tight(out / np.linalg.norm(out), lat432)

    w = 1 / 7  # frame bound ratio ~ 1.9e3
    eig_err, svd_err = dln_of(gw.eig_tight, w), dln_of(gw.svd_tight, w)
    assert eig_err > 10 * svd_err
    assert svd_err < 1e-12
