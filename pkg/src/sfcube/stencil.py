"""3D Game of Life with a configurable stencil, traversed along an ordering.

Cells live in path-index order of a layout. An update sweeps the centres in
that order and reads neighbours through the layout's tables, so the memory
access pattern is the ordering's while the result is not: updates are
synchronous (double buffered) and the border of width ``g`` is frozen.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InvalidArgumentError
from .orderings import Dims, LayoutMap, OrderingSpec


@dataclass(frozen=True)
class RuleSpec:
    """Live-neighbour intervals (inclusive) for survival and birth."""

    g: int
    survive_lo: int
    survive_hi: int
    born_lo: int
    born_hi: int

    def __post_init__(self):
        if self.g < 1:
            raise InvalidArgumentError(f"g={self.g} must be >= 1")
        top = self.neighbours
        if not 0 <= self.survive_lo <= self.survive_hi <= top:
            raise InvalidArgumentError(f"survive interval must lie in [0, {top}]")
        if not 0 <= self.born_lo <= self.born_hi <= top:
            raise InvalidArgumentError(f"born interval must lie in [0, {top}]")

    @property
    def neighbours(self) -> int:
        return (2 * self.g + 1) ** 3 - 1

    @classmethod
    def default(cls, g: int = 1) -> "RuleSpec":
        """Classic 23/3 at ``g = 1``; interval fractions of the neighbourhood beyond."""
        if g == 1:
            return cls(1, 2, 3, 3, 3)
        v = (2 * g + 1) ** 3 - 1
        born = int(0.11 * v)
        return cls(g, int(0.08 * v), int(0.12 * v), born, born)


@dataclass
class Grid:
    """Cell states stored in path order of ``ordering``."""

    dims: Dims
    ordering: OrderingSpec
    cells: np.ndarray
    generation: int = 0

    def __post_init__(self):
        if self.cells.shape != (self.dims.size,):
            raise InvalidArgumentError(f"expected {self.dims.size} cells, got {self.cells.shape}")

    def to_cube(self, layout: LayoutMap) -> np.ndarray:
        """States as an ``(M, M, M)`` array indexed ``[k, i, j]``."""
        M = self.dims.M
        return self.cells[layout.rmo_to_path].reshape(M, M, M)

    def copy(self) -> "Grid":
        return Grid(self.dims, self.ordering, self.cells.copy(), self.generation)


def init_grid(layout: LayoutMap, density: float, seed: int) -> Grid:
    """Random fill keyed on row-major offset, so every layout sees the same cube."""
    if not 0.0 <= density <= 1.0:
        raise InvalidArgumentError(f"density {density} outside [0, 1]")
    rng = np.random.default_rng(seed)
    alive = rng.random(layout.dims.size) < density
    cells = alive.astype(np.uint8)[layout.path_to_rmo]
    return Grid(layout.dims, layout.spec, cells)


@numba.njit(cache=True, nogil=True)
def _step(cells, out, q, p, M, g, soff, s_lo, s_hi, b_lo, b_hi):
    for ipath in range(cells.size):
        irmo = q[ipath]
        k = irmo // (M * M)
        i = (irmo // M) % M
        j = irmo % M
        if k < g or k >= M - g or i < g or i >= M - g or j < g or j >= M - g:
            out[ipath] = cells[ipath]
            continue
        live = 0
        for s in range(soff.size):
            live += cells[p[irmo + soff[s]]]
        if cells[ipath]:
            out[ipath] = 1 if s_lo <= live <= s_hi else 0
        else:
            out[ipath] = 1 if b_lo <= live <= b_hi else 0


def _neighbour_offsets(M: int, g: int) -> np.ndarray:
    r = np.arange(-g, g + 1, dtype=np.int64)
    dk, di, dj = np.meshgrid(r, r, r, indexing="ij")
    off = ((dk * M + di) * M + dj).ravel()
    return off[off != 0]


def _check(grid: Grid, layout: LayoutMap, rule: RuleSpec) -> None:
    if grid.ordering != layout.spec:
        raise InvalidArgumentError("grid is stored in a different ordering than the layout")
    if 2 * rule.g >= grid.dims.M:
        raise InvalidArgumentError(f"stencil g={rule.g} too large for M={grid.dims.M}")


def step(grid: Grid, layout: LayoutMap, rule: RuleSpec) -> Grid:
    """One synchronous update; returns a new grid."""
    _check(grid, layout, rule)
    out = np.empty_like(grid.cells)
    _step(
        grid.cells, out, layout.path_to_rmo, layout.rmo_to_path, grid.dims.M, rule.g,
        _neighbour_offsets(grid.dims.M, rule.g),
        rule.survive_lo, rule.survive_hi, rule.born_lo, rule.born_hi,
    )
    return Grid(grid.dims, grid.ordering, out, grid.generation + 1)


@dataclass(frozen=True)
class RunResult:
    grid: Grid
    elapsed: float
    time_per_update: float


def run(grid: Grid, layout: LayoutMap, rule: RuleSpec, iterations: int = 10) -> RunResult:
    """Apply ``iterations`` steps and time them with a monotonic clock.

    ``time_per_update`` divides by the number of interior cell updates.
    The two buffers are swapped between steps, so only the sweeps are timed.
    """
    if iterations < 1:
        raise InvalidArgumentError("iterations must be >= 1")
    _check(grid, layout, rule)
    M, g = grid.dims.M, rule.g
    soff = _neighbour_offsets(M, g)
    q, p = layout.path_to_rmo, layout.rmo_to_path
    args = (rule.survive_lo, rule.survive_hi, rule.born_lo, rule.born_hi)
    cur = grid.cells.copy()
    nxt = np.empty_like(cur)
    t0 = time.perf_counter_ns()
    for _ in range(iterations):
        _step(cur, nxt, q, p, M, g, soff, *args)
        cur, nxt = nxt, cur
    elapsed = (time.perf_counter_ns() - t0) * 1e-9
    final = Grid(grid.dims, grid.ordering, cur, grid.generation + iterations)
    return RunResult(final, elapsed, elapsed / (iterations * (M - 2 * g) ** 3))


@dataclass(frozen=True)
class StencilTiming:
    ordering: str
    M: int
    g: int
    iterations: int
    mean_time: float
    std_time: float


def time_runs(
    grid: Grid, layout: LayoutMap, rule: RuleSpec, iterations: int = 10, repeats: int = 10
) -> StencilTiming:
    """Repeat :func:`run` from the same start and summarise time per update.

    One untimed warm-up step triggers JIT compilation first.
    """
    if repeats < 1:
        raise InvalidArgumentError("repeats must be >= 1")
    step(grid, layout, rule)
    samples = np.array(
        [run(grid, layout, rule, iterations).time_per_update for _ in range(repeats)]
    )
    return StencilTiming(
        layout.spec.label, grid.dims.M, rule.g, iterations,
        float(samples.mean()), float(samples.std()),
    )
