"""Acceptance criteria, one test per criterion.

Each test prints `ACCEPTANCE <n> <name>: PASS/FAIL` (visible with
`pytest -s`) and enforces its stated tolerance and runtime budget.
"""

import json
import time

import numpy as np
import pytest

from eigensurf.calculus import dist, freedist
from eigensurf.cli import main
from eigensurf.deformation import CLASS_TWIST, jacobian_surface
from eigensurf.deformation import displacement_field, estimate_deformation_gradient
from eigensurf.eigensurface import build_eigensurface, normalize_surface
from eigensurf.matrix_io import Surface, write_matrix
from eigensurf.multires import PipelineConfig, compare_at_scale, run_pipeline
from eigensurf.preprocess import interpolate_rows, sort_and_align
from eigensurf.stencils import diff1, diff2
from eigensurf.synth import antidiag_matrix, diag_matrix, planted_pair

from conftest import make_matrix


def _verdict(num, name, ok):
    print(f"ACCEPTANCE {num:2d} {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"acceptance criterion {num} ({name}) failed"


@pytest.fixture(scope="module")
def planted_files(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance")
    control, deformed, truth = planted_pair()
    write_matrix(control, out / "control.csv")
    write_matrix(deformed, out / "deformed.csv")
    return out / "control.csv", out / "deformed.csv", truth


def test_criterion_01_trace_identity():
    """|sum of eigenvalues| == |trace| on >= 1000 random windows, 1e-9."""
    rng = np.random.default_rng(1)
    start = time.time()
    worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(2, 11))
        w = rng.normal(size=(k, k)) * rng.uniform(1e-2, 1e2)
        surf = build_eigensurface(w, k)
        eig = abs(np.linalg.eigvals(w).sum())
        worst = max(worst, abs(surf.values[0, 0] - eig))
    elapsed = time.time() - start
    _verdict(1, "trace-identity", worst <= 1e-9 and elapsed < 10.0)


def test_criterion_02_doubled_surface():
    """E of the doubled fixture is exactly twice E of the base, 1e-9."""
    start = time.time()
    a = diag_matrix(100, 100)
    ea = build_eigensurface(a.values, 40)
    eb = build_eigensurface(2.0 * a.values, 40)
    gap = np.max(np.abs(eb.values - 2.0 * ea.values))
    elapsed = time.time() - start
    _verdict(2, "doubled-height", gap <= 1e-9 and elapsed < 5.0)


def test_criterion_03_normalized_identical():
    """Min-max normalization makes the scaled pair identical, 1e-12."""
    a = diag_matrix(100, 100)
    ea = normalize_surface(build_eigensurface(a.values, 40))
    eb = normalize_surface(build_eigensurface(2.0 * a.values, 40))
    _verdict(3, "normalized-identical",
             np.max(np.abs(ea.values - eb.values)) <= 1e-12)


def test_criterion_04_structure_differences():
    """Diagonal vs anti-diagonal: same range, >= 1% of cells differ > 0.1."""
    k = 40
    ec = build_eigensurface(diag_matrix(100, 100).values, k)
    ed = build_eigensurface(antidiag_matrix(100, 100).values, k)
    # closed-form values: ridge windows carry k marked cells, anti-diagonal
    # windows at most one
    ridge = np.eye(61, dtype=bool)
    c_ok = (np.all(ec.values[ridge] == 2.0 * k)
            and np.all(ec.values[~ridge] == float(k)))
    d_ok = set(np.unique(ed.values)) == {float(k), float(k + 1)}
    nc, nd = normalize_surface(ec), normalize_surface(ed)
    range_ok = (nc.values.min() == nd.values.min() == 0.0
                and nc.values.max() == nd.values.max() == 1.0)
    frac = np.mean(np.abs(nc.values - nd.values) > 0.1)
    _verdict(4, "structure-differences",
             c_ok and d_ok and range_ok and frac >= 0.01)


def test_criterion_05_stencil_order():
    """Second-order convergence (>= 3.9x per halving); quadratics exact."""
    def max_errors(n):
        x = np.linspace(0.0, 1.0, n)
        h = x[1] - x[0]
        f = np.sin(2 * np.pi * x)
        e1 = np.max(np.abs(diff1(f, spacing=h) - 2 * np.pi * np.cos(2 * np.pi * x)))
        e2 = np.max(np.abs(diff2(f, spacing=h)
                           + (2 * np.pi) ** 2 * np.sin(2 * np.pi * x)))
        return e1, e2

    coarse, fine = max_errors(41), max_errors(81)
    order_ok = coarse[0] / fine[0] >= 3.9 and coarse[1] / fine[1] >= 3.9

    x = np.linspace(-2.0, 3.0, 21)
    h = x[1] - x[0]
    q = 1.5 * x ** 2 - 2.0 * x + 0.5
    exact_ok = (np.max(np.abs(diff1(q, spacing=h) - (3.0 * x - 2.0))) < 1e-9
                and np.max(np.abs(diff2(q, spacing=h) - 3.0)) < 1e-9)
    _verdict(5, "stencil-order", order_ok and exact_ok)


def test_criterion_06_knot_fidelity():
    """Interpolation reproduces every original knot within 1e-9."""
    rng = np.random.default_rng(6)
    matrix = make_matrix(rng.normal(size=(20, 12)) * 50)
    n_target = 1 + 9 * (matrix.n - 1)  # original knots stay on the new grid
    out = interpolate_rows(matrix, n_target)
    gap = np.max(np.abs(out.values[:, ::9] - matrix.values))
    _verdict(6, "knot-fidelity", gap <= 1e-9)


def test_criterion_07_distance_algebra():
    """Dist/FreeDist symmetry, zero-on-equal, [0,1], scale invariance."""
    rng = np.random.default_rng(7)
    start = time.time()
    ok = True
    for _ in range(50):
        a = Surface(values=rng.normal(size=(12, 9)) * rng.uniform(0.01, 100))
        b = Surface(values=rng.normal(size=(12, 9)) * rng.uniform(0.01, 100))
        ok &= np.array_equal(dist(a, b).values, dist(b, a).values)
        ok &= np.array_equal(freedist(a, b).values, freedist(b, a).values)
        ok &= np.all(dist(a, a).values == 0.0)
        ok &= np.all(freedist(a, a).values == 0.0)
        fd = freedist(a, b).values
        ok &= bool(np.all(fd >= 0.0) and np.all(fd <= 1.0))
        scaled = freedist(Surface(values=3.0 * a.values),
                          Surface(values=3.0 * b.values)).values
        live = np.abs(a.values) + np.abs(b.values) > 0
        ok &= bool(np.max(np.abs(fd[live] - scaled[live])) < 1e-12)
    elapsed = time.time() - start
    _verdict(7, "distance-algebra", ok and elapsed < 5.0)


def test_criterion_08_deformation_semantics():
    rng = np.random.default_rng(8)
    w = rng.normal(size=(30, 25))
    sa = Surface(values=w)

    identity = jacobian_surface(sa, Surface(values=w.copy()), 5)
    identity_ok = np.max(np.abs(identity.values - 3.0)) <= 1e-9

    inverted = estimate_deformation_gradient(displacement_field(w, -w))
    inverted_ok = (inverted.height_coupling < 0
                   and inverted.deformation_class == CLASS_TWIST)

    offset = jacobian_surface(sa, Surface(values=w + 12.5), 5)
    offset_ok = np.max(np.abs(offset.values - 3.0)) <= 1e-9

    _verdict(8, "deformation-semantics", identity_ok and inverted_ok and offset_ok)


def test_criterion_09_planted_recovery(planted_files):
    """End-to-end drill finds >= 4 of the 5 planted rows in < 60 s."""
    control_path, deformed_path, truth = planted_files
    start = time.time()
    report = run_pipeline(control_path, deformed_path,
                          PipelineConfig(schedule=(40, 20, 10, 5)))
    elapsed = time.time() - start
    found = {c.global_row for c in report.candidates}
    hits = len(found & set(truth["row_indices"]))
    _verdict(9, "planted-recovery", hits >= 4 and elapsed < 60.0)


def test_criterion_10_thread_determinism(planted_files, tmp_path):
    """--threads 1 and --threads 8 produce byte-identical reports."""
    control_path, deformed_path, _ = planted_files
    blobs = []
    for threads in ("1", "8"):
        out = tmp_path / f"t{threads}"
        code = main(["compare", str(control_path), str(deformed_path),
                     "-o", str(out), "--threads", threads])
        assert code == 0
        blobs.append((out / "report.json").read_bytes())
    _verdict(10, "thread-determinism", blobs[0] == blobs[1])


def test_criterion_11_scale_smoke():
    """2000x100 interpolated pair, coarse k=40 pass, well under 5 minutes."""
    control, deformed, _ = planted_pair(2000, 100)
    start = time.time()
    pair = sort_and_align(interpolate_rows(control, 100),
                          interpolate_rows(deformed, 100), spacing=1.0)
    cmp = compare_at_scale(pair, 40, PipelineConfig())
    elapsed = time.time() - start
    shapes_ok = all(s.values.shape == (1961, 61) for s in cmp.seven)
    _verdict(11, "scale-smoke", shapes_ok and elapsed < 300.0)
