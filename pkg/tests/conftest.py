import numpy as np
import pytest

from eigensurf.matrix_io import ExpressionMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def make_matrix(values, prefix="g"):
    """Wrap a 2-D array in an ExpressionMatrix with generated labels."""
    values = np.asarray(values, dtype=np.float64)
    m, n = values.shape
    return ExpressionMatrix(
        row_ids=[f"{prefix}{i:04d}" for i in range(1, m + 1)],
        time_labels=[f"t{j}" for j in range(1, n + 1)],
        values=values,
    )
