"""3D Hilbert-type curve running from corner (0,0,0) to (M-1,M-1,M-1).

A self-similar curve whose every piece runs corner to opposite corner does
not exist in 3D, so the curve is built from two generator types:

* ``diagonal``: enters at octant corner 000 and leaves at 111. Used only for
  the whole cube.
* ``edge``: the classic 3D Hilbert generator, entering at 000 and leaving at
  001. Every sub-cube below the top level is an edge-type piece placed by a
  cube symmetry.

Octants and corners are 3-bit codes ``k<<2 | i<<1 | j``. A symmetry is a
pair ``(perm, flip)`` acting on a bit vector ``v`` as
``out[a] = v[perm[a]] ^ flip[a]`` (bit ``a`` = axis ``a``; 0 is j, 2 is k).

The recursion is compiled into a finite state machine: a state is a
(generator, symmetry) pair, and the tables map (state, octant) to
(child rank, next state) and back.
"""

from __future__ import annotations

import numpy as np

# (octant visit order, (entry corner, exit corner) of each child)
_DIAGONAL = (
    (0, 1, 3, 2, 6, 4, 5, 7),
    ((0, 1), (0, 2), (0, 2), (3, 7), (3, 1), (3, 7), (6, 7), (5, 7)),
)
_EDGE = (
    (0, 2, 6, 4, 5, 7, 3, 1),
    ((0, 2), (0, 4), (0, 4), (6, 7), (6, 7), (5, 1), (5, 1), (3, 1)),
)

_IDENTITY = ((0, 1, 2), (0, 0, 0))


def _apply(sym, v):
    perm, flip = sym
    out = 0
    for a in range(3):
        out |= (((v >> perm[a]) & 1) ^ flip[a]) << a
    return out


def _compose(outer, inner):
    """Symmetry equal to applying ``inner`` first, then ``outer``."""
    po, fo = outer
    pi, fi = inner
    perm = tuple(pi[po[a]] for a in range(3))
    flip = tuple(fi[po[a]] ^ fo[a] for a in range(3))
    return perm, flip


def _edge_placement(entry, exit_):
    # Maps the canonical edge piece (000 -> 001) onto entry -> exit.
    diff = entry ^ exit_
    d = diff.bit_length() - 1
    if diff != 1 << d:
        raise AssertionError("edge piece endpoints must differ in one axis")
    rest = [a for a in range(3) if a != d]
    perm = [0, 0, 0]
    perm[d] = 0
    perm[rest[0]], perm[rest[1]] = 1, 2
    flip = tuple((entry >> a) & 1 for a in range(3))
    return tuple(perm), flip


def _build_tables():
    generators = {"diagonal": _DIAGONAL, "edge": _EDGE}
    root = ("diagonal", _IDENTITY)
    states = [root]
    index = {root: 0}
    enc_rank, enc_next, dec_oct, dec_next = [], [], [], []
    pos = 0
    while pos < len(states):
        kind, sym = states[pos]
        order, corners = generators[kind]
        rank_row, enext_row = [0] * 8, [0] * 8
        oct_row, dnext_row = [0] * 8, [0] * 8
        for n in range(8):
            child = ("edge", _compose(sym, _edge_placement(*corners[n])))
            if child not in index:
                index[child] = len(states)
                states.append(child)
            actual = _apply(sym, order[n])
            rank_row[actual] = n
            enext_row[actual] = index[child]
            oct_row[n] = actual
            dnext_row[n] = index[child]
        enc_rank.append(rank_row)
        enc_next.append(enext_row)
        dec_oct.append(oct_row)
        dec_next.append(dnext_row)
        pos += 1
    tables = [np.array(t, dtype=np.int64) for t in (enc_rank, enc_next, dec_oct, dec_next)]
    for t in tables:
        t.flags.writeable = False
    return tables


ENC_RANK, ENC_NEXT, DEC_OCTANT, DEC_NEXT = _build_tables()
NUM_STATES = ENC_RANK.shape[0]


def _is_scalar(*xs):
    return all(np.ndim(x) == 0 for x in xs)


def hilbert_index(k, i, j, m):
    """Hilbert index of ``(k, i, j)`` in a cube of side ``2**m``.

    Works elementwise on integer arrays. No range checking is done here;
    see :func:`sfcube.orderings.hilbert_encode` for the validated entry
    point.
    """
    scalar = _is_scalar(k, i, j)
    k = np.asarray(k, dtype=np.int64)
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    state = np.zeros(np.broadcast(k, i, j).shape, dtype=np.int64)
    index = np.zeros_like(state)
    for level in range(m - 1, -1, -1):
        octant = ((k >> level) & 1) << 2 | ((i >> level) & 1) << 1 | ((j >> level) & 1)
        index = (index << 3) | ENC_RANK[state, octant]
        state = ENC_NEXT[state, octant]
    return int(index) if scalar else index


def hilbert_coords(index, m):
    """Inverse of :func:`hilbert_index`; returns ``(k, i, j)``."""
    scalar = _is_scalar(index)
    index = np.asarray(index, dtype=np.int64)
    state = np.zeros(index.shape, dtype=np.int64)
    k = np.zeros_like(index)
    i = np.zeros_like(index)
    j = np.zeros_like(index)
    for level in range(m - 1, -1, -1):
        rank = (index >> (3 * level)) & 7
        octant = DEC_OCTANT[state, rank]
        state = DEC_NEXT[state, rank]
        k = (k << 1) | (octant >> 2)
        i = (i << 1) | ((octant >> 1) & 1)
        j = (j << 1) | (octant & 1)
    if scalar:
        return int(k), int(i), int(j)
    return k, i, j
