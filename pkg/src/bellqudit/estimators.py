"""scikit-learn style wrappers around the classifiers.

Each row of ``X`` is a weight vector: ``(lambda_1, ..., lambda_d)`` for
``family="fam"`` or ``(lambda_0, ..., lambda_d)`` for ``family="famg"``.
Nothing is learned; ``fit`` only validates the input and records ``d_``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .classify import EIG_TOL, Verdict, VerdictKind, classify_fam, classify_famg
from .states import FamGWeights, FamWeights

FAMILIES = ("fam", "famg")


def _weights(row, family: str):
    return FamWeights(row) if family == "fam" else FamGWeights(row)


class _WeightsMixin:
    def _validate_family(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")

    def _check(self, X, reset: bool) -> np.ndarray:
        X = check_array(X, dtype=np.float64, ensure_min_features=2)
        if reset:
            self._validate_family()
            self.n_features_in_ = X.shape[1]
            self.d_ = X.shape[1] - (self.family == "famg")
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but {type(self).__name__} was fitted with "
                f"{self.n_features_in_}"
            )
        for row in X:
            _weights(row, self.family)
        return X

    def fit(self, X, y=None):
        self._check(X, reset=True)
        return self


class BellDiagonalClassifier(_WeightsMixin, ClassifierMixin, BaseEstimator):
    """Predict Separable / PptEntangled / NptEntangled / Undecided per row.

    >>> clf = BellDiagonalClassifier().fit([[1/3, 1/3, 1/3]])
    >>> clf.predict([[2/7, 3/7, 2/7], [0.0, 0.0, 1.0]]).tolist()
    ['Separable', 'NptEntangled']
    """

    def __init__(self, family: str = "fam", tol_eig: float = EIG_TOL):
        self.family = family
        self.tol_eig = tol_eig

    def fit(self, X, y=None):
        super().fit(X, y)
        self.classes_ = np.array([k.value for k in VerdictKind])
        return self

    def verdicts(self, X) -> list[Verdict]:
        check_is_fitted(self, "d_")
        X = self._check(X, reset=False)
        run = classify_fam if self.family == "fam" else classify_famg
        return [run(_weights(row, self.family), tol_eig=self.tol_eig) for row in X]

    def predict(self, X) -> np.ndarray:
        return np.array([v.kind.value for v in self.verdicts(X)], dtype=object)


class PartialTransposeFeatures(_WeightsMixin, TransformerMixin, BaseEstimator):
    """Map weights to ``[min eigenvalue of rho^Gamma, best witness value]``."""

    def __init__(self, family: str = "fam"):
        self.family = family

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "d_")
        X = self._check(X, reset=False)
        run = classify_fam if self.family == "fam" else classify_famg
        out = np.empty((len(X), 2))
        for i, row in enumerate(X):
            v = run(_weights(row, self.family))
            out[i] = v.min_pt_eig, v.best_witness.best_value
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["min_pt_eig", "best_witness_value"], dtype=object)
