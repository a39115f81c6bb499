"""Amplitude-damping, phase-flip and phase-damping noise on both qubits.

Each channel applies the same single-qubit Kraus pair to A and B, giving the
four two-qubit operators ``K_i (x) K_j``.  ``apply_channel`` uses the closed
forms on the X family; ``apply_kraus_generic`` is the plain operator sum and
serves as the reference.

Amplitude damping moves population into ``|00>``::

    rho11 -> tau (rho22 + rho33)
    rho22 -> (1 - tau) rho22,  rho33 -> (1 - tau) rho33
    rho23 -> (1 - tau) rho23

Setting both ``rho22`` and ``rho33`` to ``(1 - tau) rho22`` would not conserve
the trace unless ``rho22 == rho33``; the operator sum gives the form above.
"""

from enum import Enum

import numpy as np

from . import oracle
from .errors import DomainError, StructureError
from .measures import is_x_supported

COMPLETENESS_TOL = 1e-12


class ChannelKind(str, Enum):
    AD = "ad"
    PF = "pf"
    PD = "pd"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown channel {value!r}; expected one of ad, pf, pd") from None


def check_tau(tau):
    tau = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(tau)) or np.any(tau < 0) or np.any(tau > 1):
        raise DomainError("noise strength tau must lie in [0, 1]")
    return tau


def tau_from_rate(rate, t):
    """Noise strength ``1 - exp(-rate * t)`` for a decay rate and elapsed time."""
    rate = np.asarray(rate, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(rate < 0) or np.any(t < 0):
        raise DomainError("rate and time must be non-negative")
    return -np.expm1(-rate * t)


def single_qubit_kraus(kind, tau):
    """Single-qubit Kraus pair, shape ``tau.shape + (2, 2, 2)``."""
    kind = ChannelKind.parse(kind)
    tau = check_tau(tau)
    a, b = np.sqrt(tau), np.sqrt(1.0 - tau)
    ops = np.zeros(tau.shape + (2, 2, 2), dtype=complex)
    if kind is ChannelKind.AD:
        ops[..., 0, 0, 0] = 1.0
        ops[..., 0, 1, 1] = b
        ops[..., 1, 0, 1] = a
    elif kind is ChannelKind.PF:
        ops[..., 0, 0, 0] = a
        ops[..., 0, 1, 1] = a
        ops[..., 1, 0, 0] = b
        ops[..., 1, 1, 1] = -b
    else:
        ops[..., 0, 0, 0] = 1.0
        ops[..., 0, 1, 1] = b
        ops[..., 1, 1, 1] = a
    return ops


def kraus_set(kind, tau):
    """The four operators ``K_i (x) K_j``, shape ``tau.shape + (4, 4, 4)``."""
    single = single_qubit_kraus(kind, tau)
    ops = np.einsum("...iab,...jcd->...ijacbd", single, single)
    return ops.reshape(single.shape[:-3] + (4, 4, 4))


def completeness_residual(operators):
    """``max |sum K^dagger K - I|`` over the last three axes."""
    ops = np.asarray(operators, dtype=complex)
    total = np.einsum("...kji,...kjl->...il", np.conj(ops), ops)
    return np.max(np.abs(total - np.eye(ops.shape[-1])), axis=(-2, -1))


def apply_kraus_generic(rho, operators):
    if np.any(completeness_residual(operators) > COMPLETENESS_TOL):
        raise StructureError("Kraus operators do not satisfy sum K^dagger K = I")
    return oracle.apply_kraus(rho, operators)


def apply_channel(rho, kind, tau):
    """Closed-form channel evolution of X-structured states.

    ``rho`` has shape ``(..., 4, 4)`` and broadcasts against ``tau``.
    """
    kind = ChannelKind.parse(kind)
    tau = check_tau(tau)
    rho = np.asarray(rho, dtype=complex)
    if not np.all(is_x_supported(rho)):
        raise StructureError("closed-form channels need an X-structured state")

    shape = np.broadcast_shapes(rho.shape[:-2], tau.shape)
    out = np.broadcast_to(rho, shape + (4, 4)).copy()
    if kind is ChannelKind.AD:
        keep = 1.0 - tau
        r11 = out[..., 0, 0].real
        r22 = out[..., 1, 1].real
        r33 = out[..., 2, 2].real
        # an incoming rho11 stays put: K1 (x) K1 leaves |00><00| unchanged
        out[..., 0, 0] = r11 + tau * (r22 + r33)
        out[..., 1, 1] = keep * r22
        out[..., 2, 2] = keep * r33
        out[..., 1, 2] *= keep
        out[..., 2, 1] *= keep
    else:
        factor = (1.0 - 2.0 * tau) ** 2 if kind is ChannelKind.PF else 1.0 - tau
        out[..., 1, 2] *= factor
        out[..., 2, 1] *= factor
    return out
