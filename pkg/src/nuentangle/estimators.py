"""scikit-learn transformers wrapping the state, noise and measure functions.

None of these learn anything: ``fit`` validates hyper-parameters and records
the input width, ``transform`` is a pure function of its input.  They exist so
the evolution chain can be written as a ``Pipeline``::

    pipe = make_pipeline(
        OscillationStateTransformer(),
        NoiseChannelTransformer(kind="ad", tau=0.3),
        CorrelatedDephasingTransformer(t=1.0, chi=5.0, mu=0.8),
        ResourceMeasureTransformer(),
    )
    features = pipe.fit_transform(np.column_stack([theta, phi]))

Intermediate steps pass density-matrix batches of shape ``(n, 4, 4)``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array

from .channels import ChannelKind, apply_channel, apply_kraus_generic, check_tau, kraus_set
from .dephasing import DephasingParams, apply_correlated_dephasing
from .errors import StructureError
from .measures import MEASURE_ALIASES, MEASURE_COLUMNS, measure_table
from .state import build_density_matrix, check_mixing_angle, check_phase

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10


def check_angle_pairs(X):
    """Validate an ``(n, 2)`` array of ``(theta, phi)`` rows."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 columns (theta, phi), got {X.shape[1]}")
    check_mixing_angle(X[:, 0])
    check_phase(X[:, 1])
    return X


def check_density_batch(X, tol=HERMITIAN_TOL):
    """Validate an ``(n, 4, 4)`` batch of unit-trace Hermitian matrices."""
    X = np.asarray(X)
    if X.ndim == 2 and X.shape == (4, 4):
        X = X[None]
    if X.ndim != 3 or X.shape[1:] != (4, 4):
        raise StructureError(f"expected an (n, 4, 4) batch of density matrices, got {X.shape}")
    X = X.astype(complex, copy=False)
    if not np.all(np.isfinite(X)):
        raise ValueError("density matrices contain NaN or infinity")
    if np.max(np.abs(X - np.conj(np.swapaxes(X, -1, -2))), initial=0.0) > tol:
        raise StructureError("density matrices must be Hermitian")
    trace = np.trace(X, axis1=-2, axis2=-1).real
    if np.max(np.abs(trace - 1.0), initial=0.0) > TRACE_TOL:
        raise StructureError("density matrices must have unit trace")
    return X


class OscillationStateTransformer(TransformerMixin, BaseEstimator):
    """``(theta, phi)`` rows to oscillation density matrices."""

    def fit(self, X, y=None):
        X = check_angle_pairs(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = check_angle_pairs(X)
        return build_density_matrix(X[:, 0], X[:, 1])


class NoiseChannelTransformer(TransformerMixin, BaseEstimator):
    """Apply an AD, PF or PD channel of strength ``tau`` to both qubits.

    ``method="kraus"`` uses the explicit operator sum instead of the closed
    forms, which also works for states outside the X family.
    """

    def __init__(self, kind="pd", tau=0.0, method="closed_form"):
        self.kind = kind
        self.tau = tau
        self.method = method

    def _validate_params(self):
        ChannelKind.parse(self.kind)
        check_tau(self.tau)
        if self.method not in ("closed_form", "kraus"):
            raise ValueError(f"method must be 'closed_form' or 'kraus', got {self.method!r}")

    def fit(self, X, y=None):
        self._validate_params()
        check_density_batch(X)
        return self

    def transform(self, X):
        self._validate_params()
        X = check_density_batch(X)
        if self.method == "kraus":
            return apply_kraus_generic(X, kraus_set(self.kind, self.tau))
        return apply_channel(X, self.kind, self.tau)


class CorrelatedDephasingTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, t=0.0, chi=0.1, mu=0.8):
        self.t = t
        self.chi = chi
        self.mu = mu

    def fit(self, X, y=None):
        DephasingParams(self.chi, self.mu)
        check_density_batch(X)
        return self

    def transform(self, X):
        X = check_density_batch(X)
        return apply_correlated_dephasing(X, self.t, DephasingParams(self.chi, self.mu))


class ResourceMeasureTransformer(TransformerMixin, BaseEstimator):
    """Density matrices to an ``(n, k)`` table of resource measures."""

    def __init__(self, measures=None):
        self.measures = measures

    def _columns(self):
        names = MEASURE_COLUMNS if self.measures is None else self.measures
        return tuple(dict.fromkeys(MEASURE_ALIASES[m] for m in names))

    def fit(self, X, y=None):
        self._columns()
        check_density_batch(X)
        return self

    def transform(self, X):
        X = check_density_batch(X)
        table = measure_table(X, self._columns())
        return np.column_stack([table[c] for c in self._columns()])

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self._columns(), dtype=object)
