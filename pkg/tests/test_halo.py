import itertools

import numpy as np
import pytest

from oracles import coords_of
from sfcube.errors import InvalidArgumentError
from sfcube.halo import (
    SurfaceId,
    bench_pack,
    build_surface_lists,
    pack_surface,
    unpack_surface,
)
from sfcube.orderings import OrderingSpec, build_layout
from sfcube.stencil import init_grid


def surface_coords(s, M, g):
    lo, hi = s.bounds(M, g)
    return {c for c in itertools.product(range(M), repeat=3) if lo <= c[s.axis] <= hi}


def specs(m):
    return [OrderingSpec.row_major(m), OrderingSpec.morton(m, m - 1), OrderingSpec.hilbert(m)]


def test_surface_definitions():
    assert SurfaceId.RC_FRONT.axis == 0 and SurfaceId.CS_BACK.axis == 1 and SurfaceId.SR_FRONT.axis == 2
    assert SurfaceId.RC_FRONT.bounds(8, 2) == (0, 1)
    assert SurfaceId.SR_BACK.bounds(8, 2) == (6, 7)


@pytest.mark.parametrize("m, g", [(2, 1), (3, 1), (3, 2), (4, 2)])
def test_lists(m, g):
    M = 1 << m
    for spec in specs(m):
        lists = build_surface_lists(build_layout(spec), g)
        for s in SurfaceId:
            idx = lists[s]
            assert idx.size == g * M * M
            assert np.all(np.diff(idx) > 0)
            assert set(coords_of(spec, idx)) == surface_coords(s, M, g)
        assert lists.nbytes == 6 * g * M * M * idx.itemsize


def test_row_major_front_list():
    lists = build_surface_lists(build_layout(OrderingSpec.row_major(2)), 1)
    assert lists["rc-front"].tolist() == list(range(16))


def test_union_is_border_for_g1():
    spec = OrderingSpec.hilbert(3)
    lists = build_surface_lists(build_layout(spec), 1)
    union = set(np.concatenate([lists[s] for s in SurfaceId]).tolist())
    border = {
        int(spec_idx) for spec_idx, c in enumerate(coords_of(spec, np.arange(512)))
        if min(c) < 1 or max(c) >= 7
    }
    assert union == border


def test_bad_width():
    with pytest.raises(InvalidArgumentError):
        build_surface_lists(build_layout(OrderingSpec.row_major(2)), 2)


class TestPack:
    def test_all_dead(self):
        L = build_layout(OrderingSpec.hilbert(3))
        lists = build_surface_lists(L, 1)
        assert not pack_surface(init_grid(L, 0.0, 0), lists, "sr-back").any()

    def test_row_major_front_is_prefix(self):
        L = build_layout(OrderingSpec.row_major(2))
        grid = init_grid(L, 0.5, 3)
        buf = pack_surface(grid, build_surface_lists(L, 1), SurfaceId.RC_FRONT)
        assert np.array_equal(buf, grid.cells[:16])

    @pytest.mark.parametrize("g", [1, 2])
    def test_content_independent_of_layout(self, g):
        packed = {}
        for spec in specs(4):
            L = build_layout(spec)
            grid = init_grid(L, 0.5, 4)
            lists = build_surface_lists(L, g)
            for s in SurfaceId:
                coords = coords_of(spec, lists[s])
                packed.setdefault(s, []).append(
                    dict(zip(coords, pack_surface(grid, lists, s).tolist()))
                )
        for maps in packed.values():
            assert all(m == maps[0] for m in maps[1:])

    def test_roundtrip(self):
        for spec in specs(3):
            L = build_layout(spec)
            grid = init_grid(L, 0.5, 8)
            before = grid.cells.copy()
            lists = build_surface_lists(L, 2)
            for s in SurfaceId:
                unpack_surface(pack_surface(grid, lists, s), lists, s, grid)
            assert np.array_equal(grid.cells, before)

    def test_zero_buffer_clears_exactly_surface(self):
        spec = OrderingSpec.hilbert(3)
        L = build_layout(spec)
        grid = init_grid(L, 1.0, 0)
        lists = build_surface_lists(L, 1)
        unpack_surface(np.zeros(64, dtype=np.uint8), lists, "cs-back", grid)
        dead = {c for c, v in zip(coords_of(spec, np.arange(512)), grid.cells.tolist()) if not v}
        assert dead == surface_coords(SurfaceId.CS_BACK, 8, 1)

    def test_cross_layout_transfer(self):
        A, B = (build_layout(s) for s in (OrderingSpec.row_major(3), OrderingSpec.hilbert(3)))
        src = init_grid(A, 0.5, 1)
        dst = init_grid(B, 0.0, 0)
        la, lb = build_surface_lists(A, 2), build_surface_lists(B, 2)
        for s in SurfaceId:
            buf = pack_surface(src, la, s)
            by_coord = dict(zip(coords_of(A.spec, la[s]), buf.tolist()))
            permuted = np.array([by_coord[c] for c in coords_of(B.spec, lb[s])], dtype=np.uint8)
            unpack_surface(permuted, lb, s, dst)
        a, b = src.to_cube(A), dst.to_cube(B)
        interior = np.zeros(a.shape, dtype=bool)
        interior[2:-2, 2:-2, 2:-2] = True
        assert np.array_equal(a[~interior], b[~interior])
        assert not b[interior].any()

    def test_mismatch(self):
        A, B = (build_layout(s) for s in (OrderingSpec.row_major(3), OrderingSpec.hilbert(3)))
        with pytest.raises(InvalidArgumentError):
            pack_surface(init_grid(A, 0.5, 0), build_surface_lists(B, 1), "rc-front")
        grid = init_grid(B, 0.5, 0)
        with pytest.raises(InvalidArgumentError):
            unpack_surface(np.zeros(10, dtype=np.uint8), build_surface_lists(B, 1), "rc-front", grid)


def test_bench_pack_records():
    L = build_layout(OrderingSpec.morton(4, 3))
    recs = bench_pack(init_grid(L, 0.3, 0), build_surface_lists(L, 2), repeats=4)
    assert [r.surface for r in recs] == [s.value for s in SurfaceId]
    for r in recs:
        assert (r.ordering, r.M, r.g) == ("morton-r3", 16, 2)
        assert r.mean_time > 0 and r.std_time >= 0
