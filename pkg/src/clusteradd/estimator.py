"""scikit-learn style adapter around :func:`decompose`.

Rows of ``X`` are anchor-slice values (columns in the quiver's vertex
order). ``transform`` returns the coefficients of each row on the
cluster-hammock functions of the fundamental domain, and
``inverse_transform`` rebuilds slice values from such coefficients.
"""
from __future__ import annotations

from typing import List, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .decomposition import decompose
from .functions import ClusterFunction
from .hammocks import DynkinStructure
from .quiver import QuiverSpec, ZVertex, parse_quiver


class DecompositionFailed(ValueError):
    pass


class ClusterHammockDecomposer(TransformerMixin, BaseEstimator):
    """Coefficients of slice values on the cluster-hammock functions h_x.

    Parameters
    ----------
    quiver : str or QuiverSpec
        A Dynkin quiver, e.g. ``"preset:A3:linear"``.
    level : int
        The level of the anchor slice the columns refer to.
    max_domains : int
        Search radius of the decomposition, in fundamental domains.
    """

    def __init__(self, quiver: Union[str, QuiverSpec] = "preset:A2", level: int = 0, max_domains: int = 3):
        self.quiver = quiver
        self.level = level
        self.max_domains = max_domains

    def _quiver(self) -> QuiverSpec:
        return self.quiver if isinstance(self.quiver, QuiverSpec) else parse_quiver(self.quiver)

    def fit(self, X=None, y=None):
        q = self._quiver()
        if X is not None:
            X = check_array(X, dtype=np.int64)
            if X.shape[1] != q.n:
                raise ValueError(f"X has {X.shape[1]} columns, quiver has {q.n} vertices")
        self.structure_ = DynkinStructure(q)
        self.vertices_: List[ZVertex] = self.structure_.domain_vertices()
        self.components_ = np.array(
            [
                [self.structure_.cluster_hammock(x)(ZVertex(b, self.level)) for b in q.vertices]
                for x in self.vertices_
            ],
            dtype=object,
        )
        self.n_features_in_ = q.n
        return self

    def transform(self, X):
        check_is_fitted(self, "components_")
        X = check_array(X, dtype=np.int64)
        q = self.structure_.quiver
        if X.shape[1] != q.n:
            raise ValueError(f"X has {X.shape[1]} columns, expected {q.n}")
        index = {v: k for k, v in enumerate(self.vertices_)}
        out = np.zeros((X.shape[0], len(self.vertices_)), dtype=object)
        for i, row in enumerate(X):
            f = ClusterFunction.from_values(q, self.level, {b: int(v) for b, v in zip(q.vertices, row)})
            d = decompose(f, self.max_domains, self.structure_)
            if not d.ok:
                raise DecompositionFailed(f"row {i}: {d.status} {'; '.join(d.problems)}")
            for x, c in d.terms.items():
                out[i, index[x]] = c
        return out

    def inverse_transform(self, C):
        check_is_fitted(self, "components_")
        C = np.asarray(C, dtype=object)
        if C.ndim != 2 or C.shape[1] != len(self.vertices_):
            raise ValueError(f"expected coefficient rows of length {len(self.vertices_)}")
        return C.dot(self.components_)
