"""Backend selection and striped parallel execution of the window scans.

The compiled Cython backend is used when its extension imported cleanly;
otherwise the NumPy fallback takes over. `EIGENSURF_BACKEND=python|cython`
forces a choice. The grid is split into fixed-height stripes that are
independent of the worker count, so any `threads` value produces
bit-identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py
from .errors import WindowError

try:
    from . import _kernels_cy
except ImportError:
    _kernels_cy = None

# Stripe height is a constant, never derived from the worker count:
# the work decomposition (and thus every float) is thread-count invariant.
_STRIPE_ROWS = 32

# Windows whose control-height variation beyond the planar trend falls at
# or below this fraction of the total (shifted) variation are treated as
# rank deficient and get the crushed-surface convention.
JACOBIAN_DEGENERATE_RTOL = 1e-12

SPECTRAL_MODES = ("eigen", "svd")


def available_backends() -> tuple[str, ...]:
    return ("cython", "python") if _kernels_cy is not None else ("python",)


def default_backend() -> str:
    forced = os.environ.get("EIGENSURF_BACKEND")
    if forced:
        if forced not in ("cython", "python"):
            raise ValueError(f"EIGENSURF_BACKEND must be cython or python, got '{forced}'")
        if forced == "cython" and _kernels_cy is None:
            raise ValueError("EIGENSURF_BACKEND=cython but the extension is not built")
        return forced
    return "cython" if _kernels_cy is not None else "python"


def _module(backend: str | None):
    name = backend or default_backend()
    if name == "cython":
        if _kernels_cy is None:
            raise ValueError("cython backend requested but the extension is not built")
        return _kernels_cy
    if name == "python":
        return _kernels_py
    raise ValueError(f"unknown backend '{name}'")


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def _run_striped(task, n_rows: int, threads: int) -> None:
    stripes = [(r0, min(r0 + _STRIPE_ROWS, n_rows))
               for r0 in range(0, n_rows, _STRIPE_ROWS)]
    if threads == 1 or len(stripes) == 1:
        for r0, r1 in stripes:
            task(r0, r1)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task, r0, r1) for r0, r1 in stripes]
        for fut in futures:
            fut.result()


def _check_window(shape: tuple[int, int], k: int) -> tuple[int, int]:
    m, n = shape
    if not 2 <= k <= min(m, n):
        raise WindowError(
            f"window size k={k} out of range 2..min({m},{n})={min(m, n)}")
    return m - k + 1, n - k + 1


def eigen_scan(values, k: int, mode: str = "eigen",
               threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """Per-window spectral sums over the full window grid.

    mode 'eigen': |sum of eigenvalues| (= |trace|) of every k x k window.
    mode 'svd': sum of singular values (nuclear norm).
    Returns an (m-k+1) x (n-k+1) float64 grid.
    """
    if mode not in SPECTRAL_MODES:
        raise ValueError(f"mode must be one of {SPECTRAL_MODES}, got '{mode}'")
    values = np.ascontiguousarray(values, dtype=np.float64)
    rows, cols = _check_window(values.shape, k)
    mod = _module(backend)
    out = np.empty((rows, cols), dtype=np.float64)
    scan = mod.trace_scan if mode == "eigen" else mod.nuclear_scan
    _run_striped(lambda r0, r1: scan(values, k, r0, r1, out),
                 rows, _resolve_threads(threads))
    return out


def jacobian_scan(control, deformed, k: int,
                  threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """Trace of the fitted affine deformation gradient per window pair."""
    control = np.ascontiguousarray(control, dtype=np.float64)
    deformed = np.ascontiguousarray(deformed, dtype=np.float64)
    if control.shape != deformed.shape:
        raise ValueError(
            f"shape mismatch: control {control.shape} vs deformed {deformed.shape}")
    rows, cols = _check_window(control.shape, k)
    mod = _module(backend)
    out = np.empty((rows, cols), dtype=np.float64)
    _run_striped(
        lambda r0, r1: mod.jacobian_scan(control, deformed, k, r0, r1, out,
                                         JACOBIAN_DEGENERATE_RTOL),
        rows, _resolve_threads(threads))
    return out
