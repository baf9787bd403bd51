"""scikit-learn style wrapper around the sparse approximation pipeline."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .dictionary import build_dictionary
from .exceptions import DimensionMismatch
from .metrics import psnr
from .omp import reconstruct, sparse_approximate
from .operators import MIN_SIZE, OperatorKind, build_operator
from .pinv import Provenance, pinv_closed_form, pinv_generic, pinv_spectral


class SparseDiffusionApproximator(TransformerMixin, BaseEstimator):
    """Approximate each row of ``X`` by its mean plus ``n_atoms`` pseudo-inverse columns.

    Parameters
    ----------
    operator : {"laplace", "biharmonic"}
    boundary : {"periodic", "neumann"}
    n_atoms : int, default=13
        Sparsity budget per signal.
    constrained : bool, default=False
        Enforce ``sum(g) = 0`` in the last coefficient update, which makes the
        result an exact solution of the inpainting equations.
    pinv_method : {"closed-form", "generic-tau", "spectral"}
        How the dictionary's pseudo-inverse is built.
    peak : float, default=1.0
        Peak value used by :meth:`score`.

    Attributes
    ----------
    operator_ : DifferenceOperator
    pinv_ : PinvMatrix
    dictionary_ : Dictionary
    n_features_in_ : int
    """

    def __init__(self, operator="laplace", boundary="neumann", n_atoms=13,
                 constrained=False, pinv_method="closed-form", peak=1.0):
        self.operator = operator
        self.boundary = boundary
        self.n_atoms = n_atoms
        self.constrained = constrained
        self.pinv_method = pinv_method
        self.peak = peak

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64, ensure_min_features=MIN_SIZE)
        n = X.shape[1]
        if not 1 <= self.n_atoms < n:
            raise ValueError(f"n_atoms must lie in [1, {n - 1}], got {self.n_atoms}")
        self.operator_ = build_operator(OperatorKind(self.operator, self.boundary), n)
        method = Provenance(self.pinv_method)
        if method is Provenance.CLOSED_FORM:
            self.pinv_ = pinv_closed_form(self.operator_)
        elif method is Provenance.GENERIC_TAU:
            self.pinv_ = pinv_generic(self.operator_)
        else:
            self.pinv_ = pinv_spectral(self.operator_)
        self.dictionary_ = build_dictionary(self.pinv_)
        self.n_features_in_ = n
        return self

    def _check_input(self, X):
        check_is_fitted(self, "dictionary_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"X has {X.shape[1]} features, estimator was fitted with {self.n_features_in_}"
            )
        return X

    def encode(self, X):
        """Return one :class:`~diffpinv.omp.SparseCode` per row of ``X``."""
        X = self._check_input(X)
        return [sparse_approximate(row, self.dictionary_, self.n_atoms, self.constrained)[0]
                for row in X]

    def transform(self, X):
        """Sparse approximations of the rows of ``X``, same shape as ``X``."""
        return self.decode(self.encode(X))

    def decode(self, codes):
        return np.vstack([reconstruct(code, self.dictionary_) for code in codes])

    def sparse_coefficients(self, X):
        """Dense ``(n_samples, n_features)`` coefficient matrix ``g`` (means excluded)."""
        return np.vstack([c.dense_coefficients(self.n_features_in_) for c in self.encode(X)])

    def score(self, X, y=None):
        """Mean PSNR (dB) of the approximations; infinite if all are exact."""
        X = self._check_input(X)
        U = self.transform(X)
        return float(np.mean([psnr(u, x, self.peak) for u, x in zip(U, X)]))
