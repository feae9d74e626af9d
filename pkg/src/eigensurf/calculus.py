"""Derivative surfaces, distance surfaces, and local-extrema detection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_io import Surface
from .stencils import diff1, diff2

DERIVATIVE_AXES = ("row", "col", "mixed")


@dataclass(frozen=True)
class SurfaceBundle:
    """A surface with its first- and second-derivative surfaces."""

    E: Surface
    D1: Surface
    D2: Surface
    axis: str


@dataclass(frozen=True)
class Extremum:
    """A strict local extremum of |surface|, at a 1-based interior cell."""

    position: tuple[int, int]
    value: float
    kind: str  # 'max' | 'min'


def derivative_surfaces(E: Surface, axis: str = "mixed") -> SurfaceBundle:
    """First/second derivative surfaces of E on a unit grid.

    axis 'row' or 'col': D1 and D2 differentiate along that axis only.
    axis 'mixed': D1 is the mixed derivative d2E/(dr ds) (first-derivative
    stencils composed along both axes) and D2 is the Laplacian
    d2E/dr2 + d2E/ds2.
    """
    if axis not in DERIVATIVE_AXES:
        raise ValueError(f"axis must be one of {DERIVATIVE_AXES}, got '{axis}'")
    rows, cols = E.values.shape
    if axis in ("row", "mixed") and rows < 3:
        raise ValueError(f"need >= 3 rows to differentiate, surface has {rows}")
    if axis in ("col", "mixed") and cols < 3:
        raise ValueError(f"need >= 3 cols to differentiate, surface has {cols}")
    if axis == "row":
        d1 = diff1(E.values, axis=0)
        d2 = diff2(E.values, axis=0)
    elif axis == "col":
        d1 = diff1(E.values, axis=1)
        d2 = diff2(E.values, axis=1)
    else:
        d1 = diff1(diff1(E.values, axis=0), axis=1)
        d2 = diff2(E.values, axis=0) + diff2(E.values, axis=1)
    mk = lambda grid: Surface(values=grid, origin=E.origin, window_size=E.window_size)
    return SurfaceBundle(E=E, D1=mk(d1), D2=mk(d2), axis=axis)


def _check_pair(a: Surface, b: Surface) -> int:
    if a.values.shape != b.values.shape:
        raise ValueError(f"shape mismatch: {a.values.shape} vs {b.values.shape}")
    if a.origin != b.origin:
        raise ValueError(f"origin mismatch: {a.origin} vs {b.origin}")
    return a.window_size if a.window_size == b.window_size else 0


def dist(a: Surface, b: Surface) -> Surface:
    """Elementwise absolute difference |A - B|."""
    k = _check_pair(a, b)
    return Surface(values=np.abs(a.values - b.values), origin=a.origin,
                   window_size=k)


def freedist(a: Surface, b: Surface) -> Surface:
    """Scale-free distance |A - B| / (|A| + |B|); 0/0 cells map to 0."""
    k = _check_pair(a, b)
    num = np.abs(a.values - b.values)
    den = np.abs(a.values) + np.abs(b.values)
    grid = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return Surface(values=grid, origin=a.origin, window_size=k)


def local_extrema(delta: Surface, top_k: int = 10) -> list[Extremum]:
    """Strict local extrema of |delta| over the 8-neighborhood.

    Only interior cells qualify (boundary cells lack a full neighborhood).
    Results are sorted by value descending, ties broken by (row, col),
    and truncated to `top_k`.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    w = np.abs(delta.values)
    rows, cols = w.shape
    if rows < 3 or cols < 3:
        raise ValueError(f"surface too small for interior extrema: {rows}x{cols}")

    center = w[1:-1, 1:-1]
    is_max = np.ones_like(center, dtype=bool)
    is_min = np.ones_like(center, dtype=bool)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            nb = w[1 + dr:rows - 1 + dr, 1 + dc:cols - 1 + dc]
            is_max &= center > nb
            is_min &= center < nb

    found = []
    for kind, mask in (("max", is_max), ("min", is_min)):
        for r, c in np.argwhere(mask):
            found.append(Extremum(position=(int(r) + 2, int(c) + 2),
                                  value=float(center[r, c]), kind=kind))
    found.sort(key=lambda e: (-e.value, e.position))
    return found[:top_k]
