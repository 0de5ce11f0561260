"""Command-line driver producing CSV for orderings, locality models and timings."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError
from .halo import SurfaceId, bench_pack, build_surface_lists
from .locality import CacheConfig, StencilSpec, cache_model, offset_histogram, surface_cache_model
from .orderings import Dims, Kind, OrderingSpec, build_layout
from .stencil import RuleSpec, init_grid, time_runs

SCHEMA = 1

COLUMNS = {
    "dump-order": ["path", "k", "i", "j"],
    "hist": ["ordering", "M", "g", "offset", "count"],
    "cachesim": ["ordering", "M", "g", "b", "c", "mode", "surface", "nmisses", "naccesses"],
    "bench-stencil": [
        "ordering", "M", "g", "iterations", "mean_time_per_update", "std_time_per_update",
    ],
    "bench-pack": ["ordering", "M", "g", "surface", "mean_time", "std_time"],
}
TIMED = {"bench-stencil", "bench-pack"}


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{x:.9g}"
    return str(x)


def _ordering_specs(args, m: int) -> list[OrderingSpec]:
    specs = []
    for name in args.ordering:
        kind = Kind(name)
        if kind is Kind.ROW_MAJOR:
            specs.append(OrderingSpec.row_major(m))
        elif kind is Kind.HILBERT:
            specs.append(OrderingSpec.hilbert(m))
        elif kind is Kind.MORTON:
            if args.level:
                levels = args.level
            elif args.block_exp:
                # block side 2**t; t = 0 (single items) equals the deepest level
                levels = [m - t if t >= 1 else m - 1 for t in args.block_exp]
            else:
                levels = [m - 1]
            specs.extend(OrderingSpec.morton(m, r) for r in dict.fromkeys(levels))
        elif kind is Kind.HYBRID:
            if not args.block_exp:
                raise UsageError("--ordering hybrid needs --block-exp")
            specs.extend(
                OrderingSpec.hybrid(m, args.inner, args.outer, t) for t in args.block_exp
            )
        else:
            raise UsageError(f"unknown ordering {name!r}")
    return specs


def _parse_mode(text: str, touch: str) -> list[tuple[str, SurfaceId | None, bool]]:
    centre_only = touch == "center"
    if text == "interior":
        if centre_only:
            raise UsageError("--touch center needs a border or surface mode")
        return [("interior", None, False)]
    suffix = "-center" if centre_only else ""
    if text == "border":
        return [("border" + suffix, None, centre_only)]
    if text.startswith("surface:"):
        name = text.split(":", 1)[1]
        if name == "each":
            return [("surface" + suffix, s, centre_only) for s in SurfaceId]
        try:
            return [("surface" + suffix, SurfaceId(name), centre_only)]
        except ValueError:
            raise UsageError(f"unknown surface {name!r}") from None
    raise UsageError(f"unknown mode {text!r}")


@lru_cache(maxsize=None)
def _layout(spec: OrderingSpec):
    return build_layout(spec)


def _plan(args) -> list[tuple]:
    """Expand sweep flags into concrete work items, validating everything."""
    plan = []
    for m in args.m:
        dims = Dims(m)
        specs = _ordering_specs(args, m)
        if args.command == "dump-order":
            plan.extend((spec,) for spec in specs)
            continue
        for spec, g in itertools.product(specs, args.g):
            stencil = StencilSpec(g)
            stencil.check(dims)
            if args.command == "hist":
                plan.append((spec, stencil))
            elif args.command == "cachesim":
                modes = [x for text in args.mode for x in _parse_mode(text, args.touch)]
                for b, c, mode in itertools.product(args.b, args.c, modes):
                    cache = CacheConfig(b, c)
                    cache.check(dims)
                    plan.append((spec, stencil, cache, mode))
            elif args.command == "bench-stencil":
                plan.append((spec, RuleSpec.default(g) if args.rule is None else RuleSpec(g, *args.rule)))
            elif args.command == "bench-pack":
                plan.append((spec, g))
    if args.command == "dump-order" and len(plan) != 1:
        raise UsageError("dump-order takes exactly one ordering and one --m")
    if args.command in TIMED:
        if getattr(args, "iterations", 1) < 1 or args.repeats < 1:
            raise UsageError("--iterations and --repeats must be >= 1")
        if not 0.0 <= args.density <= 1.0:
            raise UsageError("--density must lie in [0, 1]")
    return plan


def _dump_order(item, args):
    (spec,) = item
    layout = _layout(spec)
    k, i, j = layout.coords(np.arange(spec.dims.size))
    return [(p, kk, ii, jj) for p, kk, ii, jj in zip(range(spec.dims.size), k.tolist(), i.tolist(), j.tolist())]


def _hist(item, args):
    spec, stencil = item
    h = offset_histogram(_layout(spec), stencil)
    M = spec.dims.M
    return [
        (spec.label, M, stencil.g, x, n)
        for x, n in zip(h.offsets.tolist(), h.counts.tolist())
    ]


def _cachesim(item, args):
    spec, stencil, cache, (mode, surface, centre_only) = item
    layout = _layout(spec)
    if mode == "interior":
        stats = cache_model(layout, stencil, cache)
    else:
        stats = surface_cache_model(layout, stencil, cache, surface, centre_only)
    label = surface.value if surface is not None else "all"
    return [(
        spec.label, spec.dims.M, stencil.g, cache.b, cache.c, mode, label,
        stats.nmisses, stats.naccesses,
    )]


def _bench_stencil(item, args):
    spec, rule = item
    layout = _layout(spec)
    grid = init_grid(layout, args.density, args.seed)
    t = time_runs(grid, layout, rule, args.iterations, args.repeats)
    return [(t.ordering, t.M, t.g, t.iterations, t.mean_time, t.std_time)]


def _bench_pack(item, args):
    spec, g = item
    layout = _layout(spec)
    grid = init_grid(layout, args.density, args.seed)
    lists = build_surface_lists(layout, g)
    return [
        (t.ordering, t.M, t.g, t.surface, t.mean_time, t.std_time)
        for t in bench_pack(grid, lists, args.repeats)
    ]


HANDLERS = {
    "dump-order": _dump_order,
    "hist": _hist,
    "cachesim": _cachesim,
    "bench-stencil": _bench_stencil,
    "bench-pack": _bench_pack,
}


def render(command: str, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    if command in TIMED:
        info = time.get_clock_info("perf_counter")
        buf.write(f"# clock=perf_counter_ns monotonic={info.monotonic} resolution={info.resolution:.9g}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS[command])
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sfcube-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--ordering", action="append", choices=["rowmajor", "morton", "hilbert", "hybrid"],
        help="ordering to use; repeat to sweep (default: rowmajor)",
    )
    common.add_argument("--level", type=int, action="append", help="Morton level r; repeatable")
    common.add_argument(
        "--block-exp", type=int, action="append",
        help="block side exponent t (hybrid blocks, or Morton block size 2**t); repeatable",
    )
    parts = [k.value for k in (Kind.ROW_MAJOR, Kind.MORTON_FULL, Kind.HILBERT)]
    common.add_argument("--inner", choices=parts, default="rowmajor")
    common.add_argument("--outer", choices=parts, default="morton-full")
    common.add_argument("--m", type=int, action="append", required=True, help="cube side 2**m; repeatable")
    common.add_argument("--out", default="-", help="output CSV path (default: stdout)")

    stencil = argparse.ArgumentParser(add_help=False)
    stencil.add_argument("--g", type=int, action="append", help="stencil/halo half-width; repeatable (default: 1)")

    timed = argparse.ArgumentParser(add_help=False)
    timed.add_argument("--density", type=float, default=0.3)
    timed.add_argument("--seed", type=int, default=0)
    timed.add_argument("--repeats", type=int, default=10)

    parallel = argparse.ArgumentParser(add_help=False)
    parallel.add_argument("--jobs", type=int, default=1, help="sweep points analysed concurrently")

    parser = argparse.ArgumentParser(prog="sfcube", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dump-order", parents=[common], help="list (path, k, i, j) along an ordering")
    sub.add_parser("hist", parents=[common, stencil, parallel], help="stencil offset histograms")
    p = sub.add_parser("cachesim", parents=[common, stencil, parallel], help="LRU cache-miss model")
    p.add_argument("--b", type=int, action="append", help="items per line; repeatable (default: 8)")
    p.add_argument("--c", type=int, action="append", help="lines in cache; repeatable (default: 512)")
    p.add_argument(
        "--mode", action="append",
        help="interior | border | surface:<id> | surface:each; repeatable (default: interior)",
    )
    p.add_argument(
        "--touch", choices=["stencil", "center"], default="stencil",
        help="border/surface centres probe the whole stencil or only themselves",
    )
    p = sub.add_parser("bench-stencil", parents=[common, stencil, timed], help="time gol3d updates")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument(
        "--rule", type=int, nargs=4, metavar=("SURVIVE_LO", "SURVIVE_HI", "BORN_LO", "BORN_HI"),
        help="neighbour-count intervals (default: 23/3 at g=1, scaled beyond)",
    )
    sub.add_parser("bench-pack", parents=[common, stencil, timed], help="time halo buffer packing")
    return parser


def _defaults(args) -> None:
    args.ordering = args.ordering or ["rowmajor"]
    args.g = getattr(args, "g", None) or [1]
    if args.command == "cachesim":
        args.b = args.b or [8]
        args.c = args.c or [512]
        args.mode = args.mode or ["interior"]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _defaults(args)
    try:
        plan = _plan(args)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"sfcube {args.command}: error: {exc}", file=sys.stderr)
        return 2
    handler = HANDLERS[args.command]
    jobs = getattr(args, "jobs", 1)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            chunks = list(pool.map(lambda item: handler(item, args), plan))
    else:
        chunks = [handler(item, args) for item in plan]
    _write(render(args.command, itertools.chain.from_iterable(chunks)), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
