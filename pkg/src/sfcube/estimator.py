"""scikit-learn style wrapper around the orderings.

:class:`CurveOrdering` is a transformer from ``(k, i, j)`` coordinates to
path indices, so an ordering can sit in a ``Pipeline`` or be cloned and
grid-searched like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .orderings import Kind, OrderingSpec, build_layout, decode, encode
from .validation import check_coords, check_cube, check_path_indices, exponent_for


class CurveOrdering(TransformerMixin, BaseEstimator):
    """Map cube coordinates to positions along a space-filling ordering.

    Parameters
    ----------
    kind : {"rowmajor", "morton", "hilbert", "hybrid"}, default="hilbert"
        Ordering to apply.
    m : int or None, default=None
        Cube side is ``2**m``. Inferred from the largest coordinate seen in
        ``fit`` when None.
    level : int or None, default=None
        Morton recursion level; None means the deepest level ``m - 1``.
    block_exp : int or None, default=None
        Hybrid block side exponent ``t``.
    inner, outer : str, default="rowmajor", "morton-full"
        Hybrid orderings within and between blocks.

    Attributes
    ----------
    spec_ : OrderingSpec
    layout_ : LayoutMap
        Precomputed tables for the whole cube.
    n_features_in_ : int
        Always 3.
    """

    def __init__(
        self, kind="hilbert", m=None, level=None, block_exp=None,
        inner="rowmajor", outer="morton-full",
    ):
        self.kind = kind
        self.m = m
        self.level = level
        self.block_exp = block_exp
        self.inner = inner
        self.outer = outer

    def _make_spec(self, m: int) -> OrderingSpec:
        kind = Kind(self.kind)
        if kind is Kind.MORTON:
            level = m - 1 if self.level is None else self.level
            return OrderingSpec.morton(m, level)
        if kind is Kind.HYBRID:
            return OrderingSpec.hybrid(m, self.inner, self.outer, self.block_exp)
        if kind is Kind.HILBERT:
            return OrderingSpec.hilbert(m)
        return OrderingSpec.row_major(m)

    def fit(self, X=None, y=None):
        """Build the layout. ``X`` is only used to infer ``m`` when unset."""
        m = self.m
        if m is None:
            if X is None:
                raise ValueError("either set m or pass coordinates to fit")
            minimum = 2 if Kind(self.kind) is Kind.HILBERT else 1
            m = exponent_for(check_coords(X).max(), minimum)
        elif X is not None:
            check_coords(X)
        self.spec_ = self._make_spec(m)
        self.layout_ = build_layout(self.spec_)
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        """Path indices of the rows of ``X``, shape ``(n, 1)``."""
        check_is_fitted(self, "layout_")
        X = check_coords(X, self.spec_.dims)
        return np.asarray(encode(self.spec_, X[:, 0], X[:, 1], X[:, 2])).reshape(-1, 1)

    def inverse_transform(self, X):
        """Coordinates ``(k, i, j)`` for path indices, shape ``(n, 3)``."""
        check_is_fitted(self, "layout_")
        idx = check_path_indices(X, self.spec_.dims)
        return np.column_stack(decode(self.spec_, idx))

    def get_feature_names_out(self, input_features=None):
        return np.array(["path_index"], dtype=object)

    def reorder(self, volume):
        """Flatten an ``(M, M, M, ...)`` array into path order."""
        check_is_fitted(self, "layout_")
        volume = check_cube(volume, self.spec_.dims)
        flat = volume.reshape(self.spec_.dims.size, *volume.shape[3:])
        return flat[self.layout_.path_to_rmo]

    def restore(self, flat):
        """Inverse of :meth:`reorder`."""
        check_is_fitted(self, "layout_")
        flat = np.asarray(flat)
        M = self.spec_.dims.M
        return flat[self.layout_.rmo_to_path].reshape(M, M, M, *flat.shape[1:])
