"""Synthetic fixture matrices with known structure.

`diag`, `antidiag`, and `scaled` reproduce the classic marked-diagonal
test matrices whose Eigensurfaces have closed-form values. `planted`
builds a smooth base pair with a known perturbed block in the deformed
copy only, giving ground truth for end-to-end localization tests.
"""

from __future__ import annotations

import numpy as np

from .matrix_io import ExpressionMatrix

PLANTED_ROWS = (90, 94)  # 1-based inclusive
PLANTED_COLS = (40, 60)
PLANTED_AMPLITUDE = 5.0


def _wrap(values: np.ndarray) -> ExpressionMatrix:
    m, n = values.shape
    return ExpressionMatrix(
        row_ids=[f"g{i:04d}" for i in range(1, m + 1)],
        time_labels=[f"t{j}" for j in range(1, n + 1)],
        values=values,
    )


def diag_matrix(m: int = 100, n: int = 100) -> ExpressionMatrix:
    """All ones with 2 on the main diagonal."""
    values = np.ones((m, n))
    idx = np.arange(min(m, n))
    values[idx, idx] = 2.0
    return _wrap(values)


def antidiag_matrix(m: int = 100, n: int = 100) -> ExpressionMatrix:
    """All ones with 2 on the anti-diagonal (cell (i, n-i+1))."""
    values = np.ones((m, n))
    for i in range(1, m + 1):
        j = n - i + 1
        if 1 <= j <= n:
            values[i - 1, j - 1] = 2.0
    return _wrap(values)


def scaled_pair(m: int = 100, n: int = 100) -> tuple[ExpressionMatrix, ExpressionMatrix]:
    """The diag matrix and its doubled copy (diagonal 4, elsewhere 2)."""
    a = diag_matrix(m, n)
    b = _wrap(2.0 * a.values)
    return a, b


def planted_pair(m: int = 200, n: int = 100,
                 rows: tuple[int, int] = PLANTED_ROWS,
                 cols: tuple[int, int] = PLANTED_COLS,
                 amplitude: float = PLANTED_AMPLITUDE,
                 ) -> tuple[ExpressionMatrix, ExpressionMatrix, dict]:
    """Smooth sinusoid base pair with a perturbed block in the deformed copy.

    The base is row-monotone (0.05 * row + sin(2 pi col / 25)), so sorting
    by shape score keeps the row order and the perturbed rows stay
    contiguous. Returns (control, deformed, ground_truth).
    """
    r_lo, r_hi = rows
    c_lo, c_hi = cols
    if not (1 <= r_lo <= r_hi <= m and 1 <= c_lo <= c_hi <= n):
        raise ValueError(f"perturbed block rows {rows} cols {cols} "
                         f"outside {m}x{n}")
    i = np.arange(1, m + 1, dtype=np.float64)[:, None]
    j = np.arange(1, n + 1, dtype=np.float64)[None, :]
    base = 0.05 * i + np.sin(2.0 * np.pi * j / 25.0)
    control = _wrap(base.copy())
    perturbed = base.copy()
    perturbed[r_lo - 1:r_hi, c_lo - 1:c_hi] += amplitude
    deformed = _wrap(perturbed)
    truth = {
        "row_indices": list(range(r_lo, r_hi + 1)),
        "row_ids": control.row_ids[r_lo - 1:r_hi],
        "cols": [c_lo, c_hi],
        "amplitude": amplitude,
    }
    return control, deformed, truth
