"""Deformation-gradient estimation between aligned surface windows.

Treating two aligned windows as height fields over the same planar grid,
the deformed points are fitted as an affine function of the control
points. The linear part J is the (discrete) position gradient; its trace
equals its eigenvalue sum, and since the aligned planar coordinates map
identically (contributing a fixed +2), the height coupling c = trace - 2
carries the deformation semantics: c > 0 preserves height ordering
("less deformation"), c ~ 0 means the heights collapsed ("crushed"),
c < 0 means the height field inverted ("twist").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .matrix_io import Surface

# |c| at or below this is classified as crushed.
CLASS_EPS = 1e-6

CLASS_LESS_DEFORMATION = "less_deformation"
CLASS_CRUSHED = "crushed"
CLASS_TWIST = "twist"


@dataclass(frozen=True)
class DeformationField:
    """Point clouds of two aligned windows plus per-point displacements.

    Points are (row, col, height) triples over the window's local 1-based
    grid; displacements u = deformed - control have zero planar components
    because the grids are aligned.
    """

    control_points: np.ndarray
    deformed_points: np.ndarray
    displacements: np.ndarray


@dataclass(frozen=True)
class DeformationSummary:
    """Fitted position gradient of one window pair and its classification."""

    gradient: np.ndarray  # 3x3
    offset: np.ndarray  # length 3
    trace: float
    height_coupling: float  # c = trace - 2
    deformation_class: str
    degenerate: bool


def classify(c: float) -> str:
    if c > CLASS_EPS:
        return CLASS_LESS_DEFORMATION
    if c < -CLASS_EPS:
        return CLASS_TWIST
    return CLASS_CRUSHED


def displacement_field(w_control, w_deformed) -> DeformationField:
    """Lift two aligned windows to 3-D point clouds and subtract."""
    zc = np.asarray(w_control, dtype=np.float64)
    zd = np.asarray(w_deformed, dtype=np.float64)
    if zc.shape != zd.shape:
        raise ValueError(f"shape mismatch: {zc.shape} vs {zd.shape}")
    if zc.ndim != 2:
        raise ValueError(f"windows must be 2-D, got shape {zc.shape}")
    h, w = zc.shape
    rr, cc = np.meshgrid(np.arange(1, h + 1, dtype=np.float64),
                         np.arange(1, w + 1, dtype=np.float64), indexing="ij")
    control = np.column_stack([rr.ravel(), cc.ravel(), zc.ravel()])
    deformed = np.column_stack([rr.ravel(), cc.ravel(), zd.ravel()])
    return DeformationField(control_points=control, deformed_points=deformed,
                            displacements=deformed - control)


def estimate_deformation_gradient(field: DeformationField) -> DeformationSummary:
    """Least-squares affine fit deformed ~ J . control + b.

    The planar coordinates map identically, so J's first two rows are
    exact. The height row comes from regressing deformed heights on
    (row, col, control height); when the control heights carry no
    variation beyond a planar trend the z coefficient is pinned to 0
    (crushed convention) and the fit flagged degenerate.
    """
    X = field.control_points
    x = field.deformed_points
    if X.shape[0] < 4:
        raise ValueError(f"need >= 4 points for an affine fit, got {X.shape[0]}")
    r, c, z = X[:, 0], X[:, 1], X[:, 2]
    y = x[:, 2]

    # residual height variation after projecting out the planar trend,
    # on first-element-shifted values (same rule as the scan kernels)
    planar = np.column_stack([r, c, np.ones_like(r)])
    zs = z - z[0]
    coef_z, _, _, _ = np.linalg.lstsq(planar, zs, rcond=None)
    resid_z = zs - planar @ coef_z
    czz = float(resid_z @ resid_z)
    szz = float(zs @ zs)
    degenerate = czz <= kernels.JACOBIAN_DEGENERATE_RTOL * szz

    if degenerate:
        coef_y, _, _, _ = np.linalg.lstsq(planar, y, rcond=None)
        a_r, a_c, b = float(coef_y[0]), float(coef_y[1]), float(coef_y[2])
        d = 0.0
    else:
        design = np.column_stack([r, c, z, np.ones_like(r)])
        coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
        a_r, a_c, d, b = (float(v) for v in coef)

    gradient = np.array([[1.0, 0.0, 0.0],
                         [0.0, 1.0, 0.0],
                         [a_r, a_c, d]])
    trace = 2.0 + d
    coupling = trace - 2.0
    return DeformationSummary(gradient=gradient,
                              offset=np.array([0.0, 0.0, b]),
                              trace=trace,
                              height_coupling=coupling,
                              deformation_class=classify(coupling),
                              degenerate=degenerate)


def jacobian_surface(control: Surface, deformed: Surface, k: int,
                     threads: int | None = None,
                     backend: str | None = None) -> Surface:
    """Trace of the fitted J for every k x k window pair.

    Output dims are (R-k+1) x (C-k+1) over the shared window grid of the
    two aligned surfaces.
    """
    if control.values.shape != deformed.values.shape:
        raise ValueError(
            f"shape mismatch: {control.values.shape} vs {deformed.values.shape}")
    if control.origin != deformed.origin:
        raise ValueError(f"origin mismatch: {control.origin} vs {deformed.origin}")
    grid = kernels.jacobian_scan(control.values, deformed.values, k,
                                 threads=threads, backend=backend)
    return Surface(values=grid, origin=control.origin, window_size=k)
