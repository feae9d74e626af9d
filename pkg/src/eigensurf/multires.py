"""Coarse-to-fine multiresolution comparison of two aligned matrices.

One multiscale pass builds, at a fixed window size k, seven comparison
surfaces for the pair: distance and scale-free distance of the
Eigensurfaces and of their first/second derivative surfaces, plus the
windowed deformation-gradient (Jacobian trace) surface. The drill-down
then follows the strongest second-derivative differences through a
strictly decreasing window schedule until a terminal window names
candidate rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .calculus import (DERIVATIVE_AXES, Extremum, SurfaceBundle,
                       derivative_surfaces, dist, freedist, local_extrema)
from .deformation import jacobian_surface
from .eigensurface import build_eigensurface, normalize_surface, window_grid
from .errors import PipelineError
from .kernels import SPECTRAL_MODES, default_backend
from .matrix_io import ExpressionMatrix, Surface, load_matrix
from .preprocess import AlignedPair, interpolate_rows, sort_and_align

SURFACE_NAMES = ("dist_E", "dist_D1", "dist_D2",
                 "freedist_E", "freedist_D1", "freedist_D2", "jacobian")


@dataclass
class PipelineConfig:
    """Knobs of one pipeline run. Defaults follow the reference protocol:
    100 interpolation points, window schedule 40/20/10/5, eigen mode,
    mixed derivative axis, normalization on."""

    n_target: int = 100
    schedule: tuple[int, ...] = (40, 20, 10, 5)
    mode: str = "eigen"
    axis: str = "mixed"
    top_k: int = 10
    normalize: bool = True
    threads: int | None = None
    backend: str | None = None

    def __post_init__(self):
        self.schedule = tuple(int(k) for k in self.schedule)
        if not self.schedule:
            raise ValueError("schedule must not be empty")
        if any(k < 2 for k in self.schedule):
            raise ValueError(f"every schedule entry must be >= 2, got {self.schedule}")
        if any(a <= b for a, b in zip(self.schedule, self.schedule[1:])):
            raise ValueError(f"schedule must be strictly decreasing, got {self.schedule}")
        if self.mode not in SPECTRAL_MODES:
            raise ValueError(f"mode must be one of {SPECTRAL_MODES}, got '{self.mode}'")
        if self.axis not in DERIVATIVE_AXES:
            raise ValueError(f"axis must be one of {DERIVATIVE_AXES}, got '{self.axis}'")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if self.n_target < 3:
            raise ValueError(f"n_target must be >= 3, got {self.n_target}")

    def echo(self) -> dict:
        """Config fields that determine the report content byte-for-byte.

        `threads` is deliberately excluded: it may change wall time only,
        never any output value.
        """
        return {
            "n_target": self.n_target,
            "schedule": list(self.schedule),
            "mode": self.mode,
            "axis": self.axis,
            "top_k": self.top_k,
            "normalize": self.normalize,
            "backend": self.backend or default_backend(),
        }


@dataclass(frozen=True)
class ScaleComparison:
    """Everything one multiscale pass produces for a pair at window size k."""

    k: int
    control_bundle: SurfaceBundle
    deformed_bundle: SurfaceBundle
    surfaces: dict[str, Surface]  # the seven comparison surfaces
    delta: Surface  # |D2_control - D2_deformed|, drives extremum selection

    @property
    def seven(self) -> list[Surface]:
        return [self.surfaces[name] for name in SURFACE_NAMES]


@dataclass(frozen=True)
class DrillStep:
    """One level of the drill-down.

    `scale_k` is the sliding-window size of the scan whose extremum was
    chosen; `parent_origin` is the global 1-based top-left of the region
    scanned (of size `sub_window_dims`); `global_origin_next` is the
    chosen extremum translated to global coordinates and clamped so the
    next sub-window fits.
    """

    scale_k: int
    parent_origin: tuple[int, int]
    sub_window_dims: tuple[int, int]
    chosen_extremum: Extremum
    global_origin_next: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "scale_k": self.scale_k,
            "parent_origin": list(self.parent_origin),
            "sub_window_dims": list(self.sub_window_dims),
            "extremum": _extremum_dict(self.chosen_extremum),
            "global_origin_next": list(self.global_origin_next),
        }


@dataclass(frozen=True)
class Candidate:
    """A row named by a terminal (or early-stopped) drill window."""

    row_id: str
    global_row: int
    global_col_range: tuple[int, int]
    score: float
    from_early_stop: bool = False

    def to_json_dict(self) -> dict:
        return {
            "row_id": self.row_id,
            "global_row": self.global_row,
            "global_col_range": list(self.global_col_range),
            "score": self.score,
            "from_early_stop": self.from_early_stop,
        }


@dataclass
class DrillTrace:
    """The full record of one seed's drill-down."""

    seed: Extremum
    steps: list[DrillStep]
    candidates: list[Candidate]
    early_stop: bool

    def to_json_dict(self) -> dict:
        return {
            "seed": _extremum_dict(self.seed),
            "steps": [s.to_json_dict() for s in self.steps],
            "candidates": [c.to_json_dict() for c in self.candidates],
            "early_stop": self.early_stop,
        }


@dataclass
class ComparisonReport:
    """All outputs of one pipeline run."""

    config: PipelineConfig
    control_path: str
    deformed_path: str
    input_dims: tuple[int, int]
    interpolated_dims: tuple[int, int]
    comparison: ScaleComparison
    extrema: list[Extremum]
    drills: list[DrillTrace]
    candidates: list[Candidate]
    jacobian_mean_trace: float
    surface_files: dict[str, str] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.echo(),
            "inputs": {
                "control": self.control_path,
                "deformed": self.deformed_path,
                "rows": self.input_dims[0],
                "cols": self.input_dims[1],
                "interpolated_cols": self.interpolated_dims[1],
            },
            "notes": {
                "deformation_gradient":
                    "per-window least-squares affine fit of deformed heights "
                    "on (row, col, control height); surface holds trace(J)",
            },
            "surfaces": {str(self.comparison.k): dict(self.surface_files)},
            "jacobian_mean_trace": self.jacobian_mean_trace,
            "extrema": [_extremum_dict(e) for e in self.extrema],
            "drills": [d.to_json_dict() for d in self.drills],
            "candidates": [c.to_json_dict() for c in self.candidates],
        }


def _extremum_dict(e: Extremum) -> dict:
    return {"row": e.position[0], "col": e.position[1],
            "value": e.value, "kind": e.kind}


def _as_surface(matrix: ExpressionMatrix) -> Surface:
    return Surface(values=matrix.values, origin=(1, 1), window_size=0)


def compare_at_scale(pair: AlignedPair, k: int,
                     config: PipelineConfig) -> ScaleComparison:
    """One multiscale pass over an aligned pair at window size k."""
    window_grid(pair.control.m, pair.control.n, k)
    ec = build_eigensurface(pair.control.values, k, mode=config.mode,
                            threads=config.threads, backend=config.backend)
    ed = build_eigensurface(pair.deformed.values, k, mode=config.mode,
                            threads=config.threads, backend=config.backend)
    if config.normalize:
        ec = normalize_surface(ec)
        ed = normalize_surface(ed)
    bc = derivative_surfaces(ec, axis=config.axis)
    bd = derivative_surfaces(ed, axis=config.axis)
    jac = jacobian_surface(_as_surface(pair.control), _as_surface(pair.deformed),
                           k, threads=config.threads, backend=config.backend)
    surfaces = {
        "dist_E": dist(bc.E, bd.E),
        "dist_D1": dist(bc.D1, bd.D1),
        "dist_D2": dist(bc.D2, bd.D2),
        "freedist_E": freedist(bc.E, bd.E),
        "freedist_D1": freedist(bc.D1, bd.D1),
        "freedist_D2": freedist(bc.D2, bd.D2),
        "jacobian": jac,
    }
    return ScaleComparison(k=k, control_bundle=bc, deformed_bundle=bd,
                           surfaces=surfaces, delta=surfaces["dist_D2"])


def _clamp_origin(r: int, c: int, size: int, m: int, n: int) -> tuple[int, int]:
    return (min(max(1, r), m - size + 1), min(max(1, c), n - size + 1))


def _sub_pair(pair: AlignedPair, row: int, col: int, size: int) -> AlignedPair:
    return AlignedPair(
        control=pair.control.submatrix(row, col, size, size),
        deformed=pair.deformed.submatrix(row, col, size, size),
        permutation=tuple(range(1, size + 1)),
    )


def _extrema_or_empty(delta: Surface, top_k: int) -> list[Extremum]:
    # a grid below 3x3 has no interior cells, hence no extrema
    if delta.values.shape[0] < 3 or delta.values.shape[1] < 3:
        return []
    return local_extrema(delta, top_k=top_k)


def _window_candidates(pair: AlignedPair, row: int, col: int,
                       height: int, width: int, score: float,
                       early: bool) -> list[Candidate]:
    col_range = (col, col + width - 1)
    return [
        Candidate(row_id=pair.control.row_ids[r - 1], global_row=r,
                  global_col_range=col_range, score=score,
                  from_early_stop=early)
        for r in range(row, row + height)
    ]


def drill(pair: AlignedPair, seed: Extremum,
          config: PipelineConfig) -> tuple[list[DrillStep], list[Candidate]]:
    """Follow one seed extremum down the window schedule.

    Each level extracts the previous scale's window around the current
    origin, rescans it with the next (smaller) window size, and moves the
    origin to the strongest extremum of the new second-derivative
    difference. The terminal window's rows become candidates. A level
    whose difference surface has no interior extremum stops early and
    emits the current sub-window's rows, flagged.
    """
    m, n = pair.control.m, pair.control.n
    schedule = config.schedule
    k0 = schedule[0]
    if not (1 <= seed.position[0] <= m - k0 + 1
            and 1 <= seed.position[1] <= n - k0 + 1):
        raise ValueError(
            f"seed position {seed.position} outside the "
            f"{m - k0 + 1}x{n - k0 + 1} top-scale grid")

    origin = _clamp_origin(seed.position[0], seed.position[1], k0, m, n)
    steps = [DrillStep(scale_k=k0, parent_origin=(1, 1), sub_window_dims=(m, n),
                       chosen_extremum=seed, global_origin_next=origin)]
    last_value = seed.value

    for level in range(1, len(schedule)):
        k_outer, k_inner = schedule[level - 1], schedule[level]
        # a k_inner scan of a k_outer window yields a (k_outer-k_inner+1)^2
        # grid; below 3x3 it cannot hold an interior extremum, so the inner
        # scan is pointless and the drill stops here
        if k_outer - k_inner + 1 >= 3:
            sub = _sub_pair(pair, origin[0], origin[1], k_outer)
            cmp = compare_at_scale(sub, k_inner, config)
            found = _extrema_or_empty(cmp.delta, top_k=1)
        else:
            found = []
        if not found:
            candidates = _window_candidates(pair, origin[0], origin[1],
                                            k_outer, k_outer, last_value,
                                            early=True)
            return steps, candidates
        e = found[0]
        nxt = _clamp_origin(origin[0] + e.position[0] - 1,
                            origin[1] + e.position[1] - 1, k_inner, m, n)
        steps.append(DrillStep(scale_k=k_inner, parent_origin=origin,
                               sub_window_dims=(k_outer, k_outer),
                               chosen_extremum=e, global_origin_next=nxt))
        origin = nxt
        last_value = e.value

    k_last = schedule[-1]
    candidates = _window_candidates(pair, origin[0], origin[1],
                                    k_last, k_last, last_value, early=False)
    return steps, candidates


def _dedup_candidates(drills: list[DrillTrace]) -> list[Candidate]:
    best: dict[str, Candidate] = {}
    for trace in drills:
        for cand in trace.candidates:
            prev = best.get(cand.row_id)
            if prev is None or cand.score > prev.score:
                best[cand.row_id] = cand
    return sorted(best.values(),
                  key=lambda c: (-c.score, c.global_row, c.row_id))


def run_pipeline(control_path, deformed_path,
                 config: PipelineConfig | None = None) -> ComparisonReport:
    """Load, interpolate, align, compare at the coarsest scale, and drill.

    Any stage failure is re-raised as a PipelineError naming the stage.
    """
    config = config if config is not None else PipelineConfig()

    def stage(name, fn):
        try:
            return fn()
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(name, str(exc)) from exc

    control = stage("load", lambda: load_matrix(control_path))
    deformed = stage("load", lambda: load_matrix(deformed_path))
    if (control.m, control.n) != (deformed.m, deformed.n):
        raise PipelineError(
            "load", f"dimension mismatch: control {control.m}x{control.n}, "
                    f"deformed {deformed.m}x{deformed.n}")
    input_dims = (control.m, control.n)
    n_orig = control.n

    interp_c = stage("interpolate", lambda: interpolate_rows(control, config.n_target))
    interp_d = stage("interpolate", lambda: interpolate_rows(deformed, config.n_target))
    spacing = (n_orig - 1) / (config.n_target - 1)

    pair = stage("sort_align", lambda: sort_and_align(interp_c, interp_d,
                                                      spacing=spacing))

    k0 = config.schedule[0]
    if k0 > min(pair.control.m, pair.control.n):
        raise PipelineError(
            "compare", f"first schedule window k={k0} exceeds matrix "
                       f"dims {pair.control.m}x{pair.control.n}")
    comparison = stage("compare", lambda: compare_at_scale(pair, k0, config))
    seeds = stage("extrema", lambda: _extrema_or_empty(comparison.delta,
                                                       top_k=config.top_k))

    drills: list[DrillTrace] = []
    for seed in seeds:
        steps, cands = stage("drill", lambda s=seed: drill(pair, s, config))
        early = bool(cands) and cands[0].from_early_stop
        drills.append(DrillTrace(seed=seed, steps=steps, candidates=cands,
                                 early_stop=early))

    return ComparisonReport(
        config=config,
        control_path=str(control_path),
        deformed_path=str(deformed_path),
        input_dims=input_dims,
        interpolated_dims=(pair.control.m, pair.control.n),
        comparison=comparison,
        extrema=seeds,
        drills=drills,
        candidates=_dedup_candidates(drills),
        jacobian_mean_trace=float(comparison.surfaces["jacobian"].values.mean()),
    )
