"""Pure-NumPy scan kernels (fallback backend).

Each kernel fills grid rows [r0, r1) of a preallocated output array and
only reads/writes its own stripe, so stripes can run on worker threads
with no coordination. Results never depend on how the grid is striped.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def trace_scan(values, k, r0, r1, out):
    """|trace| of every k x k window with top-left row in [r0, r1)."""
    view = sliding_window_view(values[r0:r1 + k - 1], (k, k))
    np.abs(np.einsum("rsii->rs", view), out=out[r0:r1])


def nuclear_scan(values, k, r0, r1, out):
    """Nuclear norm (sum of singular values) of every window in the stripe."""
    view = sliding_window_view(values[r0:r1 + k - 1], (k, k))
    sv = np.linalg.svd(view, compute_uv=False)
    np.sum(sv, axis=-1, out=out[r0:r1])


def jacobian_scan(control, deformed, k, r0, r1, out, degen_rtol):
    """Trace of the fitted window Jacobian for every window pair.

    Fits deformed heights y as an affine function of (row, col, control
    height z) per window. The planar part contributes a fixed +2 to the
    trace; the z coefficient is the residual regression of y on z after
    projecting out the planar trend (values are shifted by the window's
    first element before summation to keep the sums well conditioned).
    Windows whose control heights carry no variation beyond a plane
    (constant windows included) get the crushed-surface convention,
    trace = 2.
    """
    n = float(k * k)
    t = np.arange(k, dtype=np.float64) - (k - 1) / 2.0
    splanar = float(k) * float(t @ t)  # sum of squared centered coords, both axes

    wc = sliding_window_view(control[r0:r1 + k - 1], (k, k))
    wd = sliding_window_view(deformed[r0:r1 + k - 1], (k, k))
    dz = wc - wc[:, :, 0:1, 0:1]
    dy = wd - wd[:, :, 0:1, 0:1]

    sz = dz.sum(axis=(2, 3))
    sy = dy.sum(axis=(2, 3))
    szz = np.einsum("rsij,rsij->rs", dz, dz)
    szy = np.einsum("rsij,rsij->rs", dz, dy)
    srz = np.einsum("rsij,i->rs", dz, t)
    scz = np.einsum("rsij,j->rs", dz, t)
    sry = np.einsum("rsij,i->rs", dy, t)
    scy = np.einsum("rsij,j->rs", dy, t)

    czz = szz - sz * sz / n - (srz * srz + scz * scz) / splanar
    czy = szy - sz * sy / n - (srz * sry + scz * scy) / splanar
    degenerate = czz <= degen_rtol * szz
    out[r0:r1] = np.where(degenerate, 2.0,
                          2.0 + czy / np.where(degenerate, 1.0, czz))
