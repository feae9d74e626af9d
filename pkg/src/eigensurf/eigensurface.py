"""Sliding-window spectral scan: the Eigensurface of a matrix.

E(r, s) is the absolute eigenvalue sum of the k x k window whose top-left
cell sits at 1-based matrix position (r, s). The eigenvalue sum of any
square matrix equals its trace, so the default mode computes |trace|
exactly and in real arithmetic; an SVD mode (nuclear norm) is available
as an alternative spectral summary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import WindowError
from .matrix_io import ExpressionMatrix, Surface


@dataclass(frozen=True)
class WindowSpec:
    """The window grid of one multiscale pass: size k and scan bounds."""

    k: int
    row_positions: range
    col_positions: range


def _grid_of(matrix) -> np.ndarray:
    if isinstance(matrix, ExpressionMatrix):
        return matrix.values
    if isinstance(matrix, Surface):
        return matrix.values
    return np.asarray(matrix, dtype=np.float64)


def window_grid(m: int, n: int, k: int) -> WindowSpec:
    """All 1-based top-left window positions for a k x k scan of m x n."""
    if not 2 <= k <= min(m, n):
        raise WindowError(
            f"window size k={k} out of range 2..min({m},{n})={min(m, n)}")
    return WindowSpec(k=k, row_positions=range(1, m - k + 2),
                      col_positions=range(1, n - k + 2))


def window_eigen_sum(window, mode: str = "eigen") -> float:
    """Spectral sum of one square window.

    'eigen' returns |sum of eigenvalues|, computed as |trace| (the two are
    equal for any square matrix). 'svd' returns the sum of singular
    values, which is always >= the eigen sum.
    """
    w = np.asarray(window, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"window must be square, got shape {w.shape}")
    if mode == "eigen":
        return float(abs(np.trace(w)))
    if mode == "svd":
        return float(np.linalg.svd(w, compute_uv=False).sum())
    raise ValueError(f"mode must be one of {kernels.SPECTRAL_MODES}, got '{mode}'")


def build_eigensurface(matrix, k: int, mode: str = "eigen",
                       threads: int | None = None,
                       backend: str | None = None) -> Surface:
    """Eigensurface of a matrix: the window spectral sum at every grid cell.

    Output dims are (m-k+1) x (n-k+1); cell (r, s) covers matrix rows
    r..r+k-1 and columns s..s+k-1.
    """
    values = _grid_of(matrix)
    window_grid(values.shape[0], values.shape[1], k)
    grid = kernels.eigen_scan(values, k, mode=mode, threads=threads,
                              backend=backend)
    return Surface(values=grid, origin=(1, 1), window_size=k)


def normalize_surface(surface: Surface) -> Surface:
    """Min-max rescale to [0, 1]; a constant surface maps to all zeros."""
    lo = float(surface.values.min())
    hi = float(surface.values.max())
    if hi == lo:
        grid = np.zeros_like(surface.values)
    else:
        grid = (surface.values - lo) / (hi - lo)
    return Surface(values=grid, origin=surface.origin,
                   window_size=surface.window_size)
