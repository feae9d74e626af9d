"""Second-order finite-difference stencils on uniform grids.

Central differences in the interior, one-sided stencils at the ends.
All stencils reproduce polynomials up to degree 2 exactly.
"""

import numpy as np


def diff1(a, axis: int = 0, spacing: float = 1.0) -> np.ndarray:
    """First derivative along `axis`. Needs >= 3 samples along that axis."""
    a = np.asarray(a, dtype=np.float64)
    if a.shape[axis] < 3:
        raise ValueError(f"need >= 3 samples along axis {axis}, got {a.shape[axis]}")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    a = np.moveaxis(a, axis, 0)
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - a[:-2]) / (2.0 * spacing)
    out[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * spacing)
    out[-1] = (3.0 * a[-1] - 4.0 * a[-2] + a[-3]) / (2.0 * spacing)
    return np.moveaxis(out, 0, axis)


def diff2(a, axis: int = 0, spacing: float = 1.0) -> np.ndarray:
    """Second derivative along `axis`. Needs >= 3 samples along that axis.

    End points use the 4-point one-sided stencil (second order). With only
    3 samples the parabola through them has one second derivative, and that
    value is used at the ends.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape[axis] < 3:
        raise ValueError(f"need >= 3 samples along axis {axis}, got {a.shape[axis]}")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    a = np.moveaxis(a, axis, 0)
    h2 = spacing * spacing
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - 2.0 * a[1:-1] + a[:-2]) / h2
    if a.shape[0] >= 4:
        out[0] = (2.0 * a[0] - 5.0 * a[1] + 4.0 * a[2] - a[3]) / h2
        out[-1] = (2.0 * a[-1] - 5.0 * a[-2] + 4.0 * a[-3] - a[-4]) / h2
    else:
        out[0] = out[1]
        out[-1] = out[1]
    return np.moveaxis(out, 0, axis)
