"""Exit criteria for the package, one test per criterion."""

import csv
import io
import itertools
import math
import time

import numpy as np

from oracles import all_specs, coords_of, naive_lru
from sfcube.cli import main
from sfcube.halo import SurfaceId, build_surface_lists, pack_surface, unpack_surface
from sfcube.locality import CacheConfig, StencilSpec, cache_model, surface_cache_model
from sfcube.orderings import (
    Dims,
    OrderingSpec,
    build_layout,
    decode,
    encode,
    hilbert_decode,
    morton_decode,
    morton_encode,
    morton_refine,
    row_major_decode,
)
from sfcube.stencil import RuleSpec, init_grid, step


def csv_rows(text):
    return list(csv.DictReader(io.StringIO("\n".join(l for l in text.splitlines() if not l.startswith("#")))))


def test_ac01_row_major_histogram(criterion, capsys):
    with criterion("AC1 row-major histogram identity (M=32, g=1 and g=3)"):
        t0 = time.perf_counter()
        assert main(["hist", "--m", "5", "--g", "1", "--g", "3"]) == 0
        elapsed = time.perf_counter() - t0
        rows = csv_rows(capsys.readouterr().out)
        by_g = {g: [r for r in rows if r["g"] == g] for g in ("1", "3")}
        assert len(by_g["1"]) == 27 and {r["count"] for r in by_g["1"]} == {"27000"}
        assert len(by_g["3"]) == 343 and {r["count"] for r in by_g["3"]} == {str(26**3)}
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_ac02_bijectivity(criterion):
    with criterion("AC2 every ordering is a bijection with exact inverse (m=2..5)"):
        t0 = time.perf_counter()
        checked = 0
        for m in (2, 3, 4, 5):
            dims = Dims(m)
            k, i, j = row_major_decode(np.arange(dims.size), dims)
            for spec in all_specs(m, hilbert_max_m=4):
                idx = np.asarray(encode(spec, k, i, j))
                assert np.array_equal(np.sort(idx), np.arange(dims.size)), spec
                back = decode(spec, idx)
                assert all(np.array_equal(a, b) for a, b in zip(back, (k, i, j))), spec
                forward = np.asarray(encode(spec, *decode(spec, np.arange(dims.size))))
                assert np.array_equal(forward, np.arange(dims.size)), spec
                checked += 1
        assert checked > 50
        assert time.perf_counter() - t0 < 60


def test_ac03_hilbert_contract(criterion):
    with criterion("AC3 Hilbert endpoints and unit steps (m<=4)"):
        for m in (2, 3, 4):
            dims = Dims(m)
            path = np.column_stack(hilbert_decode(np.arange(dims.size), dims))
            assert path[0].tolist() == [0, 0, 0]
            assert path[-1].tolist() == [dims.M - 1] * 3
            assert np.all(np.abs(np.diff(path, axis=0)).sum(axis=1) == 1)


def test_ac04_morton_recurrence(criterion):
    with criterion("AC4 two-rotation Morton refinement equals direct construction (m<=5)"):
        for m in (2, 3, 4, 5):
            dims = Dims(m)
            idx = np.arange(dims.size)
            for r in range(1, m):
                direct = morton_encode(*morton_decode(idx, dims, r - 1), dims, r)
                assert np.array_equal(morton_refine(idx, dims, r), direct), (m, r)


def test_ac05_cache_oracle(criterion):
    with criterion("AC5 cache model equals naive LRU simulator (M=8, 96 configs)"):
        t0 = time.perf_counter()
        specs = [OrderingSpec.row_major(3), OrderingSpec.morton(3, 1), OrderingSpec.morton(3, 2),
                 OrderingSpec.hilbert(3)]
        for spec in specs:
            layout = build_layout(spec)
            for g, b, c in itertools.product((1, 2), (1, 2, 4), (1, 2, 8, 64)):
                stats = cache_model(layout, StencilSpec(g), CacheConfig(b, c))
                assert (stats.nmisses, stats.naccesses) == naive_lru(spec, g, b, c), (spec.label, g, b, c)
        assert time.perf_counter() - t0 < 120


def test_ac06_compulsory_floor(criterion):
    with criterion("AC6 compulsory-miss floor M^3/b with a cache holding everything"):
        for m in (3, 4, 5):
            N = 8**m
            for spec in all_specs(m):
                layout = build_layout(spec)
                for b in (1, 8):
                    stats = cache_model(layout, StencilSpec(1), CacheConfig(b, N // b))
                    assert stats.nmisses == N // b, (spec.label, b)


def test_ac07_surface_trend(criterion):
    with criterion("AC7 row-major sr/rc packing misses >= 4, Hilbert max/min <= 2 (M=64)"):
        cfg, stencil = CacheConfig(8, 512), StencilSpec(1)
        miss = {}
        for spec in (OrderingSpec.row_major(6), OrderingSpec.hilbert(6)):
            layout = build_layout(spec)
            miss[spec.label] = {
                s: surface_cache_model(layout, stencil, cfg, s, centre_only=True).nmisses
                for s in SurfaceId
            }
        rm = miss["rowmajor"]
        for side in ("front", "back"):
            assert rm[SurfaceId(f"sr-{side}")] >= 4 * rm[SurfaceId(f"rc-{side}")]
        hil = miss["hilbert"].values()
        assert max(hil) <= 2 * min(hil)


def test_ac08_layout_independence(criterion):
    with criterion("AC8 gol3d final grids identical across layouts (M=8..32, g=1,2, 10 steps)"):
        for m, g in itertools.product((3, 4, 5), (1, 2)):
            rule = RuleSpec.default(g)
            finals = []
            for spec in (OrderingSpec.row_major(m), OrderingSpec.morton(m, m - 1), OrderingSpec.hilbert(m)):
                layout = build_layout(spec)
                grid = init_grid(layout, 0.3, 2024)
                for _ in range(10):
                    grid = step(grid, layout, rule)
                finals.append(grid.to_cube(layout))
            assert finals[0].any(), (m, g)
            for cube in finals[1:]:
                assert np.array_equal(cube, finals[0]), (m, g)


def test_ac09_halo(criterion):
    with criterion("AC9 halo list sizes, pack/unpack roundtrip, surface coverage (M=4..16)"):
        for m, g in itertools.product((2, 3, 4), (1, 2)):
            M = 1 << m
            if 2 * g >= M:
                continue  # a stencil of width 2g+1 does not fit
            for spec in (OrderingSpec.row_major(m), OrderingSpec.morton(m, m - 1), OrderingSpec.hilbert(m)):
                layout = build_layout(spec)
                lists = build_surface_lists(layout, g)
                grid = init_grid(layout, 0.5, m)
                before = grid.cells.copy()
                for s in SurfaceId:
                    assert lists[s].size == g * M * M
                    lo, hi = s.bounds(M, g)
                    want = {c for c in itertools.product(range(M), repeat=3) if lo <= c[s.axis] <= hi}
                    assert set(coords_of(spec, lists[s])) == want
                    unpack_surface(pack_surface(grid, lists, s), lists, s, grid)
                assert np.array_equal(grid.cells, before)


def test_ac10_bench_stencil(criterion, tmp_path):
    with criterion("AC10 bench-stencil protocol (10 iterations x 10 repeats, M=64,128, g=1,2)"):
        out = tmp_path / "stencil.csv"
        argv = ["bench-stencil", "--m", "6", "--m", "7", "--g", "1", "--g", "2",
                "--ordering", "rowmajor", "--ordering", "morton", "--ordering", "hilbert",
                "--iterations", "10", "--repeats", "10", "--out", str(out)]
        t0 = time.perf_counter()
        assert main(argv) == 0
        elapsed = time.perf_counter() - t0
        text = out.read_text()
        lines = text.splitlines()
        assert lines[0] == "# schema=1" and lines[1].startswith("# clock=")
        rows = csv_rows(text)
        assert list(rows[0]) == ["ordering", "M", "g", "iterations", "mean_time_per_update",
                                 "std_time_per_update"]
        assert len(rows) == 12
        assert {(r["M"], r["g"]) for r in rows} == {("64", "1"), ("64", "2"), ("128", "1"), ("128", "2")}
        for r in rows:
            assert r["iterations"] == "10"
            mean, std = float(r["mean_time_per_update"]), float(r["std_time_per_update"])
            assert mean > 0 and math.isfinite(mean)
            assert std >= 0 and math.isfinite(std)
        assert elapsed < 600, f"took {elapsed:.0f}s"
