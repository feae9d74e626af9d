"""Multiscale sliding-window Eigensurface comparison of time-series matrices.

Represents two row-labeled time-series matrices as surfaces, scans them
with square sliding windows to build Eigensurfaces and their derivative
and distance surfaces, and drills coarse-to-fine into the strongest
differences to localize the rows responsible.
"""

__version__ = "0.1.0"

from .calculus import (Extremum, SurfaceBundle, derivative_surfaces, dist,
                       freedist, local_extrema)
from .deformation import (DeformationField, DeformationSummary,
                          displacement_field, estimate_deformation_gradient,
                          jacobian_surface)
from .eigensurface import (WindowSpec, build_eigensurface, normalize_surface,
                           window_eigen_sum, window_grid)
from .errors import (AlignmentError, EigensurfError, MatrixFormatError,
                     PipelineError, WindowError)
from .kernels import available_backends, default_backend
from .matrix_io import (ExpressionMatrix, Surface, load_matrix, read_report,
                        read_surface, write_matrix, write_report,
                        write_surface)
from .multires import (Candidate, ComparisonReport, DrillStep, DrillTrace,
                       PipelineConfig, ScaleComparison, compare_at_scale,
                       drill, run_pipeline)
from .preprocess import (AlignedPair, SortKey, interpolate_rows,
                         signal_derivatives, sort_and_align, sort_key)

__all__ = [
    "AlignedPair", "AlignmentError", "Candidate", "ComparisonReport",
    "DeformationField", "DeformationSummary", "DrillStep", "DrillTrace",
    "EigensurfError", "ExpressionMatrix", "Extremum", "MatrixFormatError",
    "PipelineConfig", "PipelineError", "ScaleComparison", "SortKey",
    "Surface", "SurfaceBundle", "WindowError", "WindowSpec",
    "available_backends", "build_eigensurface", "compare_at_scale",
    "default_backend", "derivative_surfaces", "displacement_field", "dist",
    "drill", "estimate_deformation_gradient", "freedist", "interpolate_rows",
    "jacobian_surface", "load_matrix", "local_extrema", "normalize_surface",
    "read_report", "read_surface", "run_pipeline", "signal_derivatives",
    "sort_and_align", "sort_key", "window_eigen_sum", "window_grid",
    "write_matrix", "write_report", "write_surface",
]
