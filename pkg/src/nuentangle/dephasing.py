"""Correlated random-telegraph dephasing acting on both qubits.

Each qubit suffers a sigma_z error with probability ``p(t) = (1 - h(t)) / 2``;
the two error processes are classically correlated through ``mu``::

    p_ij = (1 - mu) p_i p_j + mu p_i delta_ij,   p_0 = 1 - p, p_3 = p

On the X family the net effect is to multiply rho23 by
``zeta(t) = (1 - mu) h(t)^2 + mu``.
"""

from dataclasses import dataclass

import numpy as np

from . import oracle
from .channels import apply_channel
from .errors import DomainError, StructureError
from .measures import is_x_supported
from .state import build_density_matrix

PAULI_0123 = (
    np.eye(2, dtype=complex),
    oracle.PAULI["x"],
    oracle.PAULI["y"],
    oracle.PAULI["z"],
)


@dataclass(frozen=True)
class DephasingParams:
    """Environmental correlation time ``chi`` and classical correlation ``mu``."""

    chi: float
    mu: float

    def __post_init__(self):
        if not np.isfinite(self.chi) or self.chi <= 0:
            raise DomainError(f"chi must be positive, got {self.chi}")
        if not np.isfinite(self.mu) or not 0.0 <= self.mu <= 1.0:
            raise DomainError(f"mu must lie in [0, 1], got {self.mu}")

    @property
    def non_markovian(self):
        return 4.0 * self.chi**2 > 1.0


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise DomainError("time must be finite and non-negative")
    return t


def decoherence_function(t, chi):
    """Random-telegraph decoherence function ``h(t)``.

    Oscillatory for ``4 chi^2 > 1``, hyperbolic for ``4 chi^2 < 1``, and the
    limit ``exp(-t / 2chi) (1 + t / 2chi)`` exactly at ``chi = 1/2``.
    """
    t = _check_time(t)
    if not np.isfinite(chi) or chi <= 0:
        raise DomainError(f"chi must be positive, got {chi}")
    gap = 4.0 * chi**2 - 1.0
    x = t / (2.0 * chi)
    envelope = np.exp(-x)
    if gap == 0.0:
        return envelope * (1.0 + x)
    upsilon = np.sqrt(abs(gap))
    if gap > 0:
        return envelope * (np.cos(upsilon * x) + np.sin(upsilon * x) / upsilon)
    # cosh/sinh overflow for large upsilon*x, so switch to the two decaying modes there
    ux = np.minimum(upsilon * x, 20.0)
    near = envelope * (np.cosh(ux) + np.sinh(ux) / upsilon)
    slow = 0.5 * (1.0 + 1.0 / upsilon) * np.exp(-(1.0 - upsilon) * x)
    fast = 0.5 * (1.0 - 1.0 / upsilon) * np.exp(-(1.0 + upsilon) * x)
    return np.where(upsilon * x > 20.0, slow + fast, near)


def flip_probability(t, chi):
    return 0.5 * (1.0 - decoherence_function(t, chi))


def _params(params):
    if isinstance(params, DephasingParams):
        return params
    return DephasingParams(*params)


def attenuation_factor(t, params):
    params = _params(params)
    h = decoherence_function(t, params.chi)
    return (1.0 - params.mu) * h**2 + params.mu


def joint_probabilities(p, mu):
    """``p_ij`` over Pauli indices 0..3, with only sigma_0 and sigma_3 active."""
    p = np.asarray(p, dtype=float)
    single = np.zeros(p.shape + (4,))
    single[..., 0] = 1.0 - p
    single[..., 3] = p
    outer = single[..., :, None] * single[..., None, :]
    return (1.0 - mu) * outer + mu * single[..., :, None] * np.eye(4)


def dephasing_kraus_operators(t, params):
    """The sixteen operators ``sqrt(p_ij) sigma_i (x) sigma_j``, shape ``t.shape + (16, 4, 4)``."""
    params = _params(params)
    p = flip_probability(t, params.chi)
    # clip rounding noise below zero before the square root
    weights = np.sqrt(np.clip(joint_probabilities(p, params.mu), 0.0, None))
    paulis = np.array([np.kron(a, b) for a in PAULI_0123 for b in PAULI_0123])
    return weights.reshape(p.shape + (16, 1, 1)) * paulis


def dephasing_kraus_map(rho, t, params):
    """Explicit operator-sum form of the correlated dephasing channel."""
    ops = dephasing_kraus_operators(t, params)
    return oracle.apply_kraus(rho, ops)


def apply_correlated_dephasing(rho, t, params):
    """Scale the rho23/rho32 coherence by ``zeta(t)``; populations are untouched."""
    rho = np.asarray(rho, dtype=complex)
    if not np.all(is_x_supported(rho)):
        raise StructureError("closed-form dephasing needs an X-structured state")
    zeta = attenuation_factor(t, params)
    shape = np.broadcast_shapes(rho.shape[:-2], np.shape(zeta))
    out = np.broadcast_to(rho, shape + (4, 4)).copy()
    out[..., 1, 2] *= zeta
    out[..., 2, 1] *= zeta
    return out


def evolve_combined(theta, phi, kind, tau, t, params):
    """Build the oscillation state, apply the noise channel, then the dephasing.

    The two maps commute on this family, so the order is a convention.
    """
    rho = build_density_matrix(theta, phi)
    rho = apply_channel(rho, kind, tau)
    return apply_correlated_dephasing(rho, t, params)
