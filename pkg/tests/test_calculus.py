"""Derivative surfaces, Dist/FreeDist, and local-extrema detection."""

import numpy as np
import pytest

from eigensurf.calculus import (derivative_surfaces, dist, freedist,
                                local_extrema)
from eigensurf.matrix_io import Surface
from eigensurf.stencils import diff1, diff2


def surface(values, origin=(1, 1), k=0):
    return Surface(values=np.asarray(values, dtype=np.float64),
                   origin=origin, window_size=k)


class TestDerivativeSurfaces:
    def test_constant_all_axes(self):
        e = surface(np.full((6, 6), 4.0))
        for axis in ("row", "col", "mixed"):
            bundle = derivative_surfaces(e, axis)
            assert np.allclose(bundle.D1.values, 0.0, atol=1e-12)
            assert np.allclose(bundle.D2.values, 0.0, atol=1e-12)

    def test_quadratic_rows_exact(self):
        r = np.arange(1.0, 9.0)[:, None]
        e = surface(np.broadcast_to(r ** 2, (8, 5)).copy())
        bundle = derivative_surfaces(e, "row")
        assert np.max(np.abs(bundle.D1.values - 2 * r)) < 1e-9
        assert np.max(np.abs(bundle.D2.values - 2.0)) < 1e-9

    def test_bilinear_mixed_exact(self):
        r = np.arange(1.0, 8.0)[:, None]
        s = np.arange(1.0, 7.0)[None, :]
        e = surface(r * s)
        bundle = derivative_surfaces(e, "mixed")
        assert np.max(np.abs(bundle.D1.values - 1.0)) < 1e-9
        assert np.max(np.abs(bundle.D2.values)) < 1e-9

    def test_metadata_shared(self):
        e = surface(np.arange(20.0).reshape(4, 5), origin=(3, 2), k=7)
        bundle = derivative_surfaces(e, "mixed")
        for part in (bundle.D1, bundle.D2):
            assert part.values.shape == e.values.shape
            assert part.origin == e.origin
            assert part.window_size == e.window_size

    def test_too_small(self):
        with pytest.raises(ValueError):
            derivative_surfaces(surface(np.ones((2, 5))), "row")
        with pytest.raises(ValueError):
            derivative_surfaces(surface(np.ones((5, 2))), "mixed")

    def test_bad_axis(self):
        with pytest.raises(ValueError, match="axis"):
            derivative_surfaces(surface(np.ones((4, 4))), "diagonal")


class TestStencilConvergence:
    def test_second_order_2d(self):
        """Halving the grid spacing shrinks worst-case error >= 3.9x."""
        def errors(n):
            x = np.linspace(0.0, 1.0, n)
            h = x[1] - x[0]
            f = np.sin(2 * np.pi * x)[:, None] * np.cos(np.pi * x)[None, :]
            d1 = diff1(f, axis=0, spacing=h)
            d2 = diff2(f, axis=0, spacing=h)
            true1 = 2 * np.pi * np.cos(2 * np.pi * x)[:, None] * np.cos(np.pi * x)[None, :]
            true2 = -(2 * np.pi) ** 2 * np.sin(2 * np.pi * x)[:, None] * np.cos(np.pi * x)[None, :]
            return (np.max(np.abs(d1 - true1)), np.max(np.abs(d2 - true2)))

        coarse = errors(41)
        fine = errors(81)
        assert coarse[0] / fine[0] >= 3.9
        assert coarse[1] / fine[1] >= 3.9


class TestDist:
    def test_self_distance_zero(self, rng):
        a = surface(rng.normal(size=(5, 5)))
        assert np.array_equal(dist(a, a).values, np.zeros((5, 5)))

    def test_scalar(self):
        out = dist(surface([[1.0]]), surface([[3.0]]))
        assert out.values[0, 0] == 2.0

    def test_symmetry(self, rng):
        a = surface(rng.normal(size=(6, 4)))
        b = surface(rng.normal(size=(6, 4)))
        assert np.array_equal(dist(a, b).values, dist(b, a).values)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            dist(surface(np.ones((2, 2))), surface(np.ones((3, 2))))

    def test_origin_mismatch(self):
        with pytest.raises(ValueError, match="origin"):
            dist(surface(np.ones((2, 2)), origin=(1, 1)),
                 surface(np.ones((2, 2)), origin=(2, 1)))


class TestFreeDist:
    def test_scalar(self):
        out = freedist(surface([[1.0]]), surface([[3.0]]))
        assert out.values[0, 0] == pytest.approx(0.5)

    def test_zero_over_zero(self):
        out = freedist(surface(np.zeros((3, 3))), surface(np.zeros((3, 3))))
        assert np.array_equal(out.values, np.zeros((3, 3)))

    def test_bounded_unit_interval(self, rng):
        for _ in range(20):
            a = surface(rng.normal(size=(8, 8)) * rng.uniform(0.01, 100))
            b = surface(rng.normal(size=(8, 8)) * rng.uniform(0.01, 100))
            v = freedist(a, b).values
            assert np.all(v >= 0.0)
            assert np.all(v <= 1.0)

    def test_symmetry(self, rng):
        a = surface(rng.normal(size=(5, 7)))
        b = surface(rng.normal(size=(5, 7)))
        assert np.array_equal(freedist(a, b).values, freedist(b, a).values)

    def test_scale_invariance(self, rng):
        av = rng.normal(size=(6, 6))
        bv = rng.normal(size=(6, 6))
        base = freedist(surface(av), surface(bv)).values
        scaled = freedist(surface(17.0 * av), surface(17.0 * bv)).values
        live = np.abs(av) + np.abs(bv) > 0
        assert np.max(np.abs(base[live] - scaled[live])) < 1e-12


class TestLocalExtrema:
    def test_single_center_peak(self):
        grid = np.zeros((3, 3))
        grid[1, 1] = 1.0
        found = local_extrema(surface(grid))
        assert len(found) == 1
        assert found[0].position == (2, 2)
        assert found[0].value == 1.0
        assert found[0].kind == "max"

    def test_flat_surface_empty(self):
        assert local_extrema(surface(np.ones((5, 5)))) == []

    def test_two_peaks_ordered(self):
        grid = np.zeros((7, 7))
        grid[2, 2] = 5.0
        grid[4, 4] = 3.0
        found = local_extrema(surface(grid))
        peaks = [e for e in found if e.kind == "max"]
        assert [e.value for e in peaks[:2]] == [5.0, 3.0]
        assert peaks[0].position == (3, 3)

    def test_magnitude_of_negative_values(self):
        grid = np.zeros((3, 3))
        grid[1, 1] = -4.0
        found = local_extrema(surface(grid))
        assert found[0].value == 4.0
        assert found[0].kind == "max"

    def test_exhaustive_scan_oracle(self, rng):
        """Independent double-loop scan of |values| finds the same cells."""
        grid = rng.normal(size=(12, 10))
        w = np.abs(grid)
        expected = []
        for r in range(1, 11):
            for s in range(1, 9):
                nb = [w[r + dr, s + ds] for dr in (-1, 0, 1) for ds in (-1, 0, 1)
                      if (dr, ds) != (0, 0)]
                if all(w[r, s] > v for v in nb):
                    expected.append(((r + 1, s + 1), "max"))
                elif all(w[r, s] < v for v in nb):
                    expected.append(((r + 1, s + 1), "min"))
        found = local_extrema(surface(grid), top_k=1000)
        assert sorted((e.position, e.kind) for e in found) == sorted(expected)

    def test_top_k_truncation(self, rng):
        grid = rng.normal(size=(20, 20))
        assert len(local_extrema(surface(grid), top_k=3)) <= 3

    def test_tie_break_lexicographic(self):
        grid = np.zeros((5, 9))
        grid[2, 2] = 2.0
        grid[2, 6] = 2.0
        found = local_extrema(surface(grid))
        maxima = [e for e in found if e.kind == "max"]
        assert maxima[0].position == (3, 3)
        assert maxima[1].position == (3, 7)

    def test_boundary_excluded(self):
        grid = np.zeros((4, 4))
        grid[0, 0] = 99.0
        found = local_extrema(surface(grid))
        assert all(e.position != (1, 1) for e in found)

    def test_too_small(self):
        with pytest.raises(ValueError, match="too small"):
            local_extrema(surface(np.ones((2, 5))))
