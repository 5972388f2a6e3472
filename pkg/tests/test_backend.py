from __future__ import annotations

import numpy as np
import pytest

from gl3moment import _backend, _fallback

ext = pytest.importorskip("gl3moment._ext")


def test_backend_is_selected():
    assert _backend.BACKEND in ("cython", "python")


@pytest.mark.parametrize("D1,D2,N", [(1, 1, 1), (4, 6, 1), (6, 4, 2), (9, 12, 3), (8, 8, 1)])
def test_gl3_hist_matches_fallback(D1, D2, N):
    freqs = np.array([[1, 2, 3, 1], [0, 0, 0, 0], [3, 1, 2, 2]])
    for bfg in (True, False):
        for z2 in (True, False):
            a = ext.gl3_hist(D1, D2, N, freqs, bfg, z2, 0)
            b = _fallback.gl3_hist(D1, D2, N, freqs, bfg, z2, 0)
            assert np.array_equal(np.asarray(a), np.asarray(b))


def test_classical_and_tilde_match_fallback():
    a = np.arange(-5, 6)
    b = np.arange(3, 14)
    for c in (1, 7, 12, 30):
        assert np.array_equal(np.asarray(ext.kloosterman_hist(a, b, c)), _fallback.kloosterman_hist(a, b, c))
    f = [[1, 1, 1], [2, 0, 3]]
    assert np.array_equal(np.asarray(ext.tilde_hist(3, 12, f)), _fallback.tilde_hist(3, 12, f))


def test_tau_matches_fallback():
    assert list(ext.tau_residues(3000)) == list(_fallback.tau_residues(3000))
