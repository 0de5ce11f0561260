"""Offset histograms and an LRU cache-miss model for stencil traversals.

Both models walk the cube through a :class:`~sfcube.orderings.LayoutMap`:
a stencil neighbour is found by row-major arithmetic on coordinates and then
mapped to its path index, which is its address in the reordered storage.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidArgumentError
from .halo import SurfaceId
from .orderings import Dims, LayoutMap


@dataclass(frozen=True)
class StencilSpec:
    """Cubic stencil of side ``2g + 1`` centred on the updated cell."""

    g: int

    def __post_init__(self):
        if self.g < 1:
            raise InvalidArgumentError(f"stencil half-width g={self.g} must be >= 1")

    @property
    def volume(self) -> int:
        return (2 * self.g + 1) ** 3

    def deltas(self):
        """``(dk, di, dj)`` arrays over the stencil, dk slowest, centre included."""
        r = np.arange(-self.g, self.g + 1, dtype=np.int64)
        dk, di, dj = np.meshgrid(r, r, r, indexing="ij")
        return dk.ravel(), di.ravel(), dj.ravel()

    def check(self, dims: Dims) -> None:
        if 2 * self.g >= dims.M:
            raise InvalidArgumentError(f"stencil g={self.g} too large for M={dims.M}")


@dataclass(frozen=True)
class CacheConfig:
    """``c`` lines of ``b`` consecutive path-order items each."""

    b: int
    c: int

    def __post_init__(self):
        if self.b < 1 or self.c < 1:
            raise InvalidArgumentError(f"cache needs b >= 1 and c >= 1, got b={self.b} c={self.c}")

    def check(self, dims: Dims) -> None:
        if dims.size % self.b:
            raise InvalidArgumentError(f"line size b={self.b} does not divide M^3={dims.size}")


@dataclass(frozen=True)
class CacheStats:
    nmisses: int
    naccesses: int

    @property
    def miss_rate(self) -> float:
        return self.nmisses / self.naccesses if self.naccesses else 0.0


class OffsetHistogram:
    """Sparse map from signed path-index offset to access count."""

    def __init__(self, offsets: np.ndarray, counts: np.ndarray):
        self.offsets = offsets
        self.counts = counts

    def __len__(self):
        return self.offsets.size

    def __getitem__(self, x: int) -> int:
        pos = np.searchsorted(self.offsets, x)
        if pos < self.offsets.size and self.offsets[pos] == x:
            return int(self.counts[pos])
        return 0

    def __eq__(self, other):
        if not isinstance(other, OffsetHistogram):
            return NotImplemented
        return np.array_equal(self.offsets, other.offsets) and np.array_equal(
            self.counts, other.counts
        )

    def __repr__(self):
        return f"OffsetHistogram(support={len(self)}, total={self.total})"

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.offsets.tolist(), self.counts.tolist()))


def _interior_centres(M: int, g: int) -> np.ndarray:
    r = np.arange(g, M - g, dtype=np.int64)
    k, i, j = np.meshgrid(r, r, r, indexing="ij")
    return ((k * M + i) * M + j).ravel()


def offset_histogram(
    layout: LayoutMap, stencil: StencilSpec, interior_neighbours_only: bool = False
) -> OffsetHistogram:
    """Accumulate ``p(neighbour) - p(centre)`` over all interior stencils.

    With ``interior_neighbours_only`` the pairs whose neighbour is itself a
    border cell are dropped; that sub-histogram is symmetric in ``x``.
    """
    dims = layout.dims
    stencil.check(dims)
    M, g = dims.M, stencil.g
    p = layout.rmo_to_path.astype(np.int64)
    centres = _interior_centres(M, g)
    ck, ci, cj = centres // (M * M), (centres // M) % M, centres % M
    pc = p[centres]
    values, weights = [], []
    for dk, di, dj in zip(*stencil.deltas()):
        x = p[centres + (dk * M + di) * M + dj] - pc
        if interior_neighbours_only:
            keep = np.ones(x.shape, dtype=bool)
            for c, d in ((ck, dk), (ci, di), (cj, dj)):
                keep &= (c + d >= g) & (c + d < M - g)
            x = x[keep]
        u, n = np.unique(x, return_counts=True)
        values.append(u)
        weights.append(n)
    offsets, inverse = np.unique(np.concatenate(values), return_inverse=True)
    counts = np.bincount(inverse, weights=np.concatenate(weights), minlength=offsets.size)
    return OffsetHistogram(offsets, counts.astype(np.int64))


class CentreSelection(enum.IntEnum):
    INTERIOR = 0
    BORDER = 1
    SURFACE = 2


@numba.njit(cache=True, nogil=True)
def _lru_walk(q, p, M, g, b, c, dk, di, dj, select, axis, lo, hi, centre_only):
    n = q.size
    nlines = n // b
    older = np.full(nlines, -1, np.int64)
    newer = np.full(nlines, -1, np.int64)
    resident = np.zeros(nlines, np.bool_)
    mru = -1
    lru = -1
    held = 0
    nmisses = 0
    naccesses = 0
    nprobe = 1 if centre_only else dk.size
    for ipath in range(n):
        irmo = q[ipath]
        k = irmo // (M * M)
        i = (irmo // M) % M
        j = irmo % M
        border = k < g or k >= M - g or i < g or i >= M - g or j < g or j >= M - g
        if select == 0:
            if border:
                continue
        elif select == 1:
            if not border:
                continue
        else:
            x = k if axis == 0 else (i if axis == 1 else j)
            if x < lo or x > hi:
                continue
        for s in range(nprobe):
            if centre_only:
                jpath = ipath
            else:
                # Border stencils wrap periodically; interior ones never do.
                kk = (k + dk[s]) % M
                ii = (i + di[s]) % M
                jj = (j + dj[s]) % M
                jpath = p[(kk * M + ii) * M + jj]
            line = jpath // b
            naccesses += 1
            if resident[line]:
                if line == mru:
                    continue
                # not the MRU, so it has a newer neighbour
                a = older[line]
                z = newer[line]
                if a >= 0:
                    newer[a] = z
                else:
                    lru = z
                older[z] = a
                older[line] = mru
                newer[line] = -1
                newer[mru] = line
                mru = line
            else:
                nmisses += 1
                if held == c:
                    victim = lru
                    lru = newer[victim]
                    if lru >= 0:
                        older[lru] = -1
                    else:
                        mru = -1
                    resident[victim] = False
                    newer[victim] = -1
                    held -= 1
                resident[line] = True
                older[line] = mru
                newer[line] = -1
                if mru >= 0:
                    newer[mru] = line
                else:
                    lru = line
                mru = line
                held += 1
    return nmisses, naccesses


def _run(layout, stencil, cache, select, surface, centre_only):
    dims = layout.dims
    stencil.check(dims)
    cache.check(dims)
    axis, lo, hi = 0, 0, -1
    if surface is not None:
        surface = SurfaceId(surface)
        axis = surface.axis
        lo, hi = surface.bounds(dims.M, stencil.g)
    dk, di, dj = stencil.deltas()
    nmisses, naccesses = _lru_walk(
        layout.path_to_rmo, layout.rmo_to_path, dims.M, stencil.g, cache.b, cache.c,
        dk, di, dj, int(select), axis, lo, hi, centre_only,
    )
    return CacheStats(int(nmisses), int(naccesses))


def cache_model(layout: LayoutMap, stencil: StencilSpec, cache: CacheConfig) -> CacheStats:
    """Count LRU misses when updating every interior cell in path order.

    Each interior centre probes every stencil location, centre included,
    in (dk, di, dj) order. A probe touches line ``path_index // b`` of a
    fully associative cache of ``c`` lines; hits refresh recency, misses
    load the line and evict the least recently used one when full.
    """
    return _run(layout, stencil, cache, CentreSelection.INTERIOR, None, False)


def surface_cache_model(
    layout: LayoutMap,
    stencil: StencilSpec,
    cache: CacheConfig,
    surface=None,
    centre_only: bool = False,
) -> CacheStats:
    """Cache model over border centres instead of interior ones.

    ``surface`` restricts centres to one :class:`SurfaceId`; ``None`` takes
    the whole border zone. By default each centre runs the full stencil
    loop, with neighbours that fall outside the cube wrapped periodically.
    ``centre_only=True`` touches just the centre item, which models packing
    the surface into a buffer.
    """
    if surface is None:
        return _run(layout, stencil, cache, CentreSelection.BORDER, None, centre_only)
    try:
        surface = SurfaceId(surface)
    except ValueError:
        raise InvalidArgumentError(f"unknown surface {surface!r}") from None
    return _run(layout, stencil, cache, CentreSelection.SURFACE, surface, centre_only)
