"""Input checks shared by the estimator wrappers and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .errors import InvalidArgumentError
from .orderings import Dims


def check_coords(X, dims: Dims | None = None) -> np.ndarray:
    """Validate an ``(n, 3)`` array of integer ``(k, i, j)`` coordinates."""
    X = check_array(X, dtype=None, ensure_min_samples=1)
    if X.shape[1] != 3:
        raise InvalidArgumentError(f"coordinates need 3 columns (k, i, j), got {X.shape[1]}")
    if not np.issubdtype(X.dtype, np.integer):
        if not np.all(np.mod(X, 1) == 0):
            raise InvalidArgumentError("coordinates must be integers")
    X = X.astype(np.int64)
    if X.min() < 0:
        raise InvalidArgumentError("coordinates must be non-negative")
    if dims is not None and X.max() >= dims.M:
        raise InvalidArgumentError(f"coordinates must be < M={dims.M}")
    return X


def check_path_indices(X, dims: Dims) -> np.ndarray:
    """Validate path indices given as ``(n,)`` or ``(n, 1)``."""
    X = np.asarray(X)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    X = check_array(X.reshape(-1, 1), dtype=None, ensure_min_samples=1)[:, 0]
    if not np.issubdtype(X.dtype, np.integer):
        raise InvalidArgumentError("path indices must be integers")
    X = X.astype(np.int64)
    if X.min() < 0 or X.max() >= dims.size:
        raise InvalidArgumentError(f"path indices must lie in [0, {dims.size})")
    return X


def check_cube(volume, dims: Dims | None = None) -> np.ndarray:
    """Validate an array whose first three axes form a cube of side ``2**m``."""
    volume = np.asarray(volume)
    if volume.ndim < 3 or not volume.shape[0] == volume.shape[1] == volume.shape[2]:
        raise InvalidArgumentError(f"expected an (M, M, M, ...) array, got {volume.shape}")
    found = Dims.from_side(volume.shape[0])
    if dims is not None and found != dims:
        raise InvalidArgumentError(f"cube side {found.M} does not match M={dims.M}")
    return volume


def exponent_for(max_coord: int, minimum: int = 0) -> int:
    """Smallest ``m >= minimum`` with ``max_coord < 2**m``."""
    return max(int(max_coord).bit_length(), minimum)
