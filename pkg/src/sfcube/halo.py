"""Halo surfaces of the cube and packing them into contiguous buffers.

Each of the six surfaces is a depth-``g`` slab of the cube. The index list
of a surface holds the path indices of its cells in increasing order, so
packing walks the layout's storage forwards. Edge and corner cells belong
to every surface that contains them.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .orderings import Dims, LayoutMap, row_major_decode


class SurfaceId(str, enum.Enum):
    RC_FRONT = "rc-front"
    RC_BACK = "rc-back"
    CS_FRONT = "cs-front"
    CS_BACK = "cs-back"
    SR_FRONT = "sr-front"
    SR_BACK = "sr-back"

    @property
    def axis(self) -> int:
        """Coordinate held fixed-range: 0 for k (rc), 1 for i (cs), 2 for j (sr)."""
        return ("rc", "cs", "sr").index(self.value[:2])

    @property
    def front(self) -> bool:
        return self.value.endswith("front")

    def bounds(self, M: int, g: int) -> tuple[int, int]:
        """Inclusive coordinate range along :attr:`axis`."""
        return (0, g - 1) if self.front else (M - g, M - 1)

    def contains(self, k, i, j, M: int, g: int):
        lo, hi = self.bounds(M, g)
        x = (k, i, j)[self.axis]
        return (x >= lo) & (x <= hi)


def _check_halo(dims: Dims, g: int) -> None:
    if g < 1 or 2 * g >= dims.M:
        raise InvalidArgumentError(f"halo width g={g} needs 1 <= g and 2g < M={dims.M}")


@dataclass(frozen=True)
class SurfaceIndexLists:
    """Per-surface path indices, each list increasing and ``g*M*M`` long."""

    layout: LayoutMap = field(repr=False)
    g: int
    lists: dict = field(repr=False)

    @property
    def dims(self) -> Dims:
        return self.layout.dims

    def __getitem__(self, s) -> np.ndarray:
        return self.lists[SurfaceId(s)]

    @property
    def nbytes(self) -> int:
        return sum(a.nbytes for a in self.lists.values())


def build_surface_lists(layout: LayoutMap, g: int) -> SurfaceIndexLists:
    """One sweep along the path recording which surfaces each cell lies in."""
    dims = layout.dims
    _check_halo(dims, g)
    k, i, j = row_major_decode(layout.path_to_rmo.astype(np.int64), dims)
    lists = {}
    for s in SurfaceId:
        idx = np.flatnonzero(s.contains(k, i, j, dims.M, g)).astype(layout.path_to_rmo.dtype)
        idx.flags.writeable = False
        lists[s] = idx
    return SurfaceIndexLists(layout, g, lists)


def _check_grid(grid, lists: SurfaceIndexLists) -> None:
    if grid.dims != lists.dims or grid.ordering != lists.layout.spec:
        raise InvalidArgumentError("surface lists were built for a different layout")


def pack_surface(grid, lists: SurfaceIndexLists, s, out=None) -> np.ndarray:
    """Copy the cells of surface ``s`` into a contiguous buffer.

    ``out``, if given, must hold ``g*M*M`` values and is filled in place.
    """
    _check_grid(grid, lists)
    return np.take(grid.cells, lists[s], out=out)


def unpack_surface(buffer: np.ndarray, lists: SurfaceIndexLists, s, grid):
    """Write ``buffer`` back into the surface cells of ``grid`` in place."""
    _check_grid(grid, lists)
    idx = lists[s]
    buffer = np.asarray(buffer)
    if buffer.shape != idx.shape:
        raise InvalidArgumentError(
            f"buffer has {buffer.size} values, surface holds {idx.size}"
        )
    grid.cells[idx] = buffer
    return grid


@dataclass(frozen=True)
class PackTiming:
    ordering: str
    M: int
    g: int
    surface: str
    mean_time: float
    std_time: float


def bench_pack(grid, lists: SurfaceIndexLists, repeats: int = 10) -> list[PackTiming]:
    """Time :func:`pack_surface` for each surface, ``repeats`` times each.

    List construction is not timed. Returns one record per surface.
    """
    _check_grid(grid, lists)
    if repeats < 1:
        raise InvalidArgumentError("repeats must be >= 1")
    out = []
    for s in SurfaceId:
        idx = lists[s]
        buf = np.empty(idx.size, dtype=grid.cells.dtype)
        samples = np.empty(repeats)
        for n in range(repeats):
            t0 = time.perf_counter_ns()
            pack_surface(grid, lists, s, out=buf)
            samples[n] = (time.perf_counter_ns() - t0) * 1e-9
        out.append(
            PackTiming(
                lists.layout.spec.label, grid.dims.M, lists.g, s.value,
                float(samples.mean()), float(samples.std()),
            )
        )
    return out
