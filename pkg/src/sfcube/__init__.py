"""Space-filling-curve layouts of 3D arrays and models of their locality."""

from .errors import InvalidArgumentError, UnsupportedOrderingError
from .estimator import CurveOrdering
from .halo import (
    SurfaceId,
    SurfaceIndexLists,
    bench_pack,
    build_surface_lists,
    pack_surface,
    unpack_surface,
)
from .locality import (
    CacheConfig,
    CacheStats,
    OffsetHistogram,
    StencilSpec,
    cache_model,
    offset_histogram,
    surface_cache_model,
)
from .orderings import (
    Dims,
    Kind,
    LayoutMap,
    OrderingSpec,
    build_layout,
    compact3,
    decode,
    dilate3,
    encode,
    hilbert_decode,
    hilbert_encode,
    hybrid_decode,
    hybrid_encode,
    morton_decode,
    morton_encode,
    morton_refine,
)
from .stencil import Grid, RuleSpec, init_grid, run, step, time_runs

__version__ = "0.1.0"
