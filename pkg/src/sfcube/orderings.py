"""Row-major, Morton, Hilbert and hybrid orderings of an M x M x M cube.

Coordinates are ``(k, i, j)``: slab, row, column. The row-major offset of a
location is ``k*M*M + i*M + j``. A *path index* is the position of a
location along an ordering, i.e. its address in a layout that stores the
cube in that order.

All encoders accept Python ints or integer numpy arrays (elementwise).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, UnsupportedOrderingError
from .hilbert import hilbert_coords, hilbert_index

MAX_EXPONENT = 20
_DILATE_WIDTH = 21

# Masks for the 3-way bit spread of a 21-bit value into 63 bits.
_SPREAD = (
    (32, 0x1F00000000FFFF),
    (16, 0x1F0000FF0000FF),
    (8, 0x100F00F00F00F00F),
    (4, 0x10C30C30C30C30C3),
    (2, 0x1249249249249249),
)


class Kind(str, enum.Enum):
    ROW_MAJOR = "rowmajor"
    MORTON = "morton"
    MORTON_FULL = "morton-full"
    HILBERT = "hilbert"
    HYBRID = "hybrid"


HYBRID_PARTS = (Kind.ROW_MAJOR, Kind.MORTON_FULL, Kind.HILBERT)


@dataclass(frozen=True)
class Dims:
    """Cube of side ``M = 2**m``."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise InvalidArgumentError(f"exponent must be an integer, got {self.m!r}")
        if not 0 <= self.m <= MAX_EXPONENT:
            raise InvalidArgumentError(f"exponent m={self.m} outside [0, {MAX_EXPONENT}]")
        object.__setattr__(self, "m", int(self.m))

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def size(self) -> int:
        return 1 << (3 * self.m)

    @classmethod
    def from_side(cls, M: int) -> "Dims":
        M = int(M)
        if M < 1 or M & (M - 1):
            raise InvalidArgumentError(f"side {M} is not a power of two")
        return cls(M.bit_length() - 1)


def _as_int(x):
    if np.ndim(x) == 0:
        return int(x)
    return np.asarray(x, dtype=np.int64)


def dilate3(x, width: int = 10):
    """Spread the low ``width`` bits of ``x`` so that bit ``b`` lands at ``3b``."""
    if not 0 <= width <= _DILATE_WIDTH:
        raise InvalidArgumentError(f"width {width} exceeds {_DILATE_WIDTH} bits")
    x = _as_int(x)
    if np.min(x) < 0 or np.max(x) >= (1 << width):
        raise InvalidArgumentError(f"value does not fit in {width} bits")
    for shift, mask in _SPREAD:
        x = (x | (x << shift)) & mask
    return x


def compact3(x, width: int = 10):
    """Inverse of :func:`dilate3`: gather every third bit of ``x``."""
    if not 0 <= width <= _DILATE_WIDTH:
        raise InvalidArgumentError(f"width {width} exceeds {_DILATE_WIDTH} bits")
    x = _as_int(x) & _SPREAD[-1][1]
    masks = [mask for _, mask in _SPREAD[-2::-1]] + [(1 << _DILATE_WIDTH) - 1]
    for (shift, _), mask in zip(_SPREAD[::-1], masks):
        x = (x | (x >> shift)) & mask
    return x & ((1 << width) - 1)


def interleave3(k, i, j, width: int):
    """Full bit interleave with k most significant within each triple."""
    return (dilate3(k, width) << 2) | (dilate3(i, width) << 1) | dilate3(j, width)


def deinterleave3(code, width: int):
    return compact3(code >> 2, width), compact3(code >> 1, width), compact3(code, width)


def _check_level(dims: Dims, r: int) -> None:
    if not 0 <= r < max(dims.m, 1):
        raise InvalidArgumentError(f"Morton level r={r} outside [0, {dims.m})")


def _check_coords(dims: Dims, k, i, j) -> None:
    lo = min(np.min(k), np.min(i), np.min(j))
    hi = max(np.max(k), np.max(i), np.max(j))
    if lo < 0 or hi >= dims.M:
        raise InvalidArgumentError(f"coordinates outside [0, {dims.M})")


def _check_index(dims: Dims, index) -> None:
    if np.min(index) < 0 or np.max(index) >= dims.size:
        raise InvalidArgumentError(f"path index outside [0, {dims.size})")


def row_major_encode(k, i, j, dims: Dims):
    return (k << (2 * dims.m)) | (i << dims.m) | j


def row_major_decode(index, dims: Dims):
    mask = dims.M - 1
    return index >> (2 * dims.m), (index >> dims.m) & mask, index & mask


def morton_encode(k, i, j, dims: Dims, r: int):
    """Level-``r`` Morton index of ``(k, i, j)``.

    The upper ``r`` bits of each coordinate are interleaved into the top
    ``3r`` bits (k, then i, then j within each triple). Below them come the
    low ``m - r`` bits of k, of i and of j, in that order. ``r = 0`` is
    plain row-major order.
    """
    _check_level(dims, r)
    _check_coords(dims, k, i, j)
    k, i, j = _as_int(k), _as_int(i), _as_int(j)
    s = dims.m - r
    low = (1 << s) - 1
    top = interleave3(k >> s, i >> s, j >> s, r)
    return (top << (3 * s)) | ((k & low) << (2 * s)) | ((i & low) << s) | (j & low)


def morton_decode(index, dims: Dims, r: int):
    """Inverse of :func:`morton_encode`."""
    _check_level(dims, r)
    _check_index(dims, index)
    index = _as_int(index)
    s = dims.m - r
    low = (1 << s) - 1
    kh, ih, jh = deinterleave3(index >> (3 * s), r)
    k = (kh << s) | ((index >> (2 * s)) & low)
    i = (ih << s) | ((index >> s) & low)
    j = (jh << s) | (index & low)
    return k, i, j


def _rotate_right(x, lo: int, hi: int):
    """Cyclically rotate bits ``lo..hi`` (inclusive) of ``x`` right by one."""
    width = hi - lo + 1
    mask = ((1 << width) - 1) << lo
    field_ = (x & mask) >> lo
    rotated = (field_ >> 1) | ((field_ & 1) << (width - 1))
    return (x & ~mask) | (rotated << lo)


def morton_refine(prev, dims: Dims, r: int):
    """Level-``r`` Morton index from the level-``r-1`` index by two rotations.

    With ``s = m - r``, the low ``3(s+1)`` bits of the coarser index hold
    the (s+1)-bit fields of k, i and j. Rotating bits ``2s+1..3s+1`` moves
    the top bit of i above the low bits of k; rotating bits ``s..3s`` then
    lifts the top bit of j into the new interleaved triple.
    """
    if not 1 <= r < dims.m:
        raise InvalidArgumentError(f"refinement level r={r} outside [1, {dims.m})")
    _check_index(dims, prev)
    prev = _as_int(prev)
    s = dims.m - r
    out = _rotate_right(prev, 2 * s + 1, 3 * s + 1)
    return _rotate_right(out, s, 3 * s)


def morton_full_encode(k, i, j, dims: Dims):
    return interleave3(k, i, j, dims.m)


def morton_full_decode(index, dims: Dims):
    return deinterleave3(index, dims.m)


def _require_hilbert(dims: Dims) -> None:
    if dims.m < 2:
        raise UnsupportedOrderingError(f"Hilbert ordering needs m >= 2, got m={dims.m}")


def hilbert_encode(k, i, j, dims: Dims):
    """Position of ``(k, i, j)`` along the Hilbert curve of the cube."""
    _require_hilbert(dims)
    _check_coords(dims, k, i, j)
    return hilbert_index(k, i, j, dims.m)


def hilbert_decode(index, dims: Dims):
    _require_hilbert(dims)
    _check_index(dims, index)
    return hilbert_coords(index, dims.m)


@dataclass(frozen=True)
class OrderingSpec:
    """Which ordering to use over a cube.

    ``level`` applies to Morton; ``block_exp``, ``inner`` and ``outer`` to
    hybrids, whose blocks have side ``2**block_exp``.
    """

    kind: Kind
    dims: Dims
    level: int | None = None
    block_exp: int | None = None
    inner: Kind | None = None
    outer: Kind | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        m = self.dims.m
        if self.kind is Kind.MORTON:
            if self.level is None:
                raise InvalidArgumentError("Morton ordering needs a level")
            _check_level(self.dims, self.level)
        elif self.kind is Kind.HILBERT:
            _require_hilbert(self.dims)
        elif self.kind is Kind.HYBRID:
            if self.inner is None or self.outer is None or self.block_exp is None:
                raise InvalidArgumentError("hybrid ordering needs inner, outer and block_exp")
            object.__setattr__(self, "inner", Kind(self.inner))
            object.__setattr__(self, "outer", Kind(self.outer))
            if self.inner not in HYBRID_PARTS or self.outer not in HYBRID_PARTS:
                raise InvalidArgumentError(
                    f"hybrid parts must be in {[p.value for p in HYBRID_PARTS]}"
                )
            t = self.block_exp
            if not 0 < t < m:
                raise InvalidArgumentError(f"block exponent t={t} outside (0, {m})")
            if self.inner is Kind.HILBERT and t < 2:
                raise UnsupportedOrderingError("Hilbert inside blocks needs t >= 2")
            if self.outer is Kind.HILBERT and m - t < 2:
                raise UnsupportedOrderingError("Hilbert between blocks needs m - t >= 2")

    @property
    def label(self) -> str:
        if self.kind is Kind.MORTON:
            return f"morton-r{self.level}"
        if self.kind is Kind.HYBRID:
            return f"hybrid-{self.inner.value}/{self.outer.value}-t{self.block_exp}"
        return self.kind.value

    @classmethod
    def row_major(cls, m: int) -> "OrderingSpec":
        return cls(Kind.ROW_MAJOR, Dims(m))

    @classmethod
    def morton(cls, m: int, level: int) -> "OrderingSpec":
        return cls(Kind.MORTON, Dims(m), level=level)

    @classmethod
    def hilbert(cls, m: int) -> "OrderingSpec":
        return cls(Kind.HILBERT, Dims(m))

    @classmethod
    def hybrid(cls, m: int, inner, outer, block_exp: int) -> "OrderingSpec":
        return cls(Kind.HYBRID, Dims(m), block_exp=block_exp, inner=inner, outer=outer)


def _plain_encode(kind: Kind, k, i, j, dims: Dims):
    if kind is Kind.ROW_MAJOR:
        return row_major_encode(k, i, j, dims)
    if kind is Kind.MORTON_FULL:
        return morton_full_encode(k, i, j, dims)
    if kind is Kind.HILBERT:
        return hilbert_index(k, i, j, dims.m)
    raise InvalidArgumentError(f"{kind} is not a plain ordering")


def _plain_decode(kind: Kind, index, dims: Dims):
    if kind is Kind.ROW_MAJOR:
        return row_major_decode(index, dims)
    if kind is Kind.MORTON_FULL:
        return morton_full_decode(index, dims)
    if kind is Kind.HILBERT:
        return hilbert_coords(index, dims.m)
    raise InvalidArgumentError(f"{kind} is not a plain ordering")


def hybrid_encode(k, i, j, spec: OrderingSpec):
    """Outer ordering over blocks, inner ordering within each block."""
    if spec.kind is not Kind.HYBRID:
        raise InvalidArgumentError("hybrid_encode needs a hybrid spec")
    _check_coords(spec.dims, k, i, j)
    k, i, j = _as_int(k), _as_int(i), _as_int(j)
    t = spec.block_exp
    low = (1 << t) - 1
    outer = _plain_encode(spec.outer, k >> t, i >> t, j >> t, Dims(spec.dims.m - t))
    inner = _plain_encode(spec.inner, k & low, i & low, j & low, Dims(t))
    return (outer << (3 * t)) | inner


def hybrid_decode(index, spec: OrderingSpec):
    if spec.kind is not Kind.HYBRID:
        raise InvalidArgumentError("hybrid_decode needs a hybrid spec")
    _check_index(spec.dims, index)
    index = _as_int(index)
    t = spec.block_exp
    kb, ib, jb = _plain_decode(spec.outer, index >> (3 * t), Dims(spec.dims.m - t))
    kl, il, jl = _plain_decode(spec.inner, index & ((1 << (3 * t)) - 1), Dims(t))
    return (kb << t) | kl, (ib << t) | il, (jb << t) | jl


def encode(spec: OrderingSpec, k, i, j):
    """Path index of ``(k, i, j)`` under ``spec``."""
    dims = spec.dims
    if spec.kind is Kind.ROW_MAJOR:
        _check_coords(dims, k, i, j)
        return row_major_encode(_as_int(k), _as_int(i), _as_int(j), dims)
    if spec.kind is Kind.MORTON:
        return morton_encode(k, i, j, dims, spec.level)
    if spec.kind is Kind.HILBERT:
        return hilbert_encode(k, i, j, dims)
    if spec.kind is Kind.HYBRID:
        return hybrid_encode(k, i, j, spec)
    raise InvalidArgumentError(f"cannot encode {spec.kind}")


def decode(spec: OrderingSpec, index):
    """``(k, i, j)`` at path index ``index`` under ``spec``."""
    dims = spec.dims
    if spec.kind is Kind.ROW_MAJOR:
        _check_index(dims, index)
        return row_major_decode(_as_int(index), dims)
    if spec.kind is Kind.MORTON:
        return morton_decode(index, dims, spec.level)
    if spec.kind is Kind.HILBERT:
        return hilbert_decode(index, dims)
    if spec.kind is Kind.HYBRID:
        return hybrid_decode(index, spec)
    raise InvalidArgumentError(f"cannot decode {spec.kind}")


@dataclass(frozen=True)
class LayoutMap:
    """Precomputed bijection between path indices and row-major offsets.

    ``path_to_rmo[p]`` is the row-major offset stored at path index ``p``;
    ``rmo_to_path[r]`` is the path index of row-major offset ``r``. Both
    arrays are read-only.
    """

    spec: OrderingSpec
    path_to_rmo: np.ndarray = field(repr=False)
    rmo_to_path: np.ndarray = field(repr=False)

    @property
    def dims(self) -> Dims:
        return self.spec.dims

    def coords(self, path_index):
        """``(k, i, j)`` of the given path indices, via the table."""
        return row_major_decode(self.path_to_rmo[path_index].astype(np.int64), self.dims)


def index_dtype(dims: Dims):
    return np.int32 if dims.size <= np.iinfo(np.int32).max else np.int64


def build_layout(spec: OrderingSpec) -> LayoutMap:
    """Materialize both direction tables for ``spec``."""
    dims = spec.dims
    dtype = index_dtype(dims)
    rmo = np.arange(dims.size, dtype=np.int64)
    if spec.kind is Kind.ROW_MAJOR:
        p = rmo
    else:
        p = encode(spec, *row_major_decode(rmo, dims))
    q = np.empty(dims.size, dtype=dtype)
    q[p] = rmo
    p = p.astype(dtype, copy=spec.kind is Kind.ROW_MAJOR)
    p.flags.writeable = False
    q.flags.writeable = False
    return LayoutMap(spec, q, p)
