"""Select compiled or numpy kernels at import time.

Set ``GL3MOMENT_PURE_PYTHON=1`` to force the numpy versions.
"""
from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
impl = _fallback

if os.environ.get("GL3MOMENT_PURE_PYTHON", "") != "1":
    try:
        from . import _ext as impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        impl = _fallback

gl3_hist = impl.gl3_hist
tilde_hist = impl.tilde_hist
kloosterman_hist = impl.kloosterman_hist
tau_residues = impl.tau_residues
yz_tables = impl.yz_tables

__all__ = ["BACKEND", "gl3_hist", "tilde_hist", "kloosterman_hist", "tau_residues", "yz_tables"]
