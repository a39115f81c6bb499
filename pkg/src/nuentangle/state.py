"""Two-flavor oscillation kinematics and the mode-entangled two-qubit state.

The basis order is ``|00>, |01>, |10>, |11>`` with qubit A the first tensor
factor.  The propagated state is ``u_aa |01> + u_ab |10>``: the survival
amplitude sits on basis index 1 and the transition amplitude on index 2, so
the survival probability is the ``rho22`` population (1-based) and the
transition probability is ``rho33``.

All functions broadcast over array inputs; a density matrix batch has shape
``(..., 4, 4)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import DomainError

# hbar*c in eV*m, then phi = dm2[eV^2] * L[km] * 1e3 / (4 * E[GeV] * 1e9 * hbar*c)
_HBARC_EV_M = constants.hbar * constants.c / constants.e
PHASE_CONSTANT = 1e3 / (4.0 * 1e9 * _HBARC_EV_M)


@dataclass(frozen=True)
class OscillationKinematics:
    """Mass splitting [eV^2], baseline [km] and energy [GeV]."""

    delta_m_squared: float
    baseline: float
    energy: float

    def __post_init__(self):
        for name in ("delta_m_squared", "baseline", "energy"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.baseline <= 0:
            raise DomainError(f"baseline must be positive, got {self.baseline}")
        if self.energy <= 0:
            raise DomainError(f"energy must be positive, got {self.energy}")


@dataclass(frozen=True)
class FlavorAmplitudes:
    """Survival amplitude ``u_aa`` and transition amplitude ``u_ab``."""

    u_aa: complex
    u_ab: complex

    @property
    def survival(self):
        return np.abs(self.u_aa) ** 2

    @property
    def transition(self):
        return np.abs(self.u_ab) ** 2

    def state_vector(self):
        """Two-qubit state vector(s), shape ``(..., 4)``."""
        u_aa = np.asarray(self.u_aa, dtype=complex)
        u_ab = np.asarray(self.u_ab, dtype=complex)
        psi = np.zeros(np.broadcast(u_aa, u_ab).shape + (4,), dtype=complex)
        psi[..., 1] = u_aa
        psi[..., 2] = u_ab
        return psi


def check_mixing_angle(theta):
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise DomainError("mixing angle must be finite")
    if np.any(theta < 0) or np.any(theta > np.pi / 2):
        raise DomainError("mixing angle must lie in [0, pi/2]")
    return theta


def check_phase(phi):
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise DomainError("oscillation phase must be finite")
    if np.any(phi < 0):
        raise DomainError("oscillation phase must be non-negative")
    return phi


def oscillation_phase(kin):
    """Oscillation phase ``dm2 L / 4E`` from lab units.

    The sign of the mass splitting is dropped: it would only flip the sign of
    ``Im(rho23)``, which none of the resource measures can see.
    """
    if not isinstance(kin, OscillationKinematics):
        kin = OscillationKinematics(*kin)
    return PHASE_CONSTANT * abs(kin.delta_m_squared) * kin.baseline / kin.energy


def flavor_amplitudes(theta, phi):
    """Survival and transition amplitudes with the ``exp(-i E_i L)`` phase factored out.

    Since ``(E_i - E_j) L = 2 phi``, only the relative phase ``e^{2i phi}`` is left::

        u_aa = cos^2 theta + sin^2 theta e^{2i phi}
        u_ab = sin theta cos theta (e^{2i phi} - 1)
    """
    theta = check_mixing_angle(theta)
    phi = check_phase(phi)
    rel = np.exp(2j * phi)
    c, s = np.cos(theta), np.sin(theta)
    return FlavorAmplitudes(c**2 + s**2 * rel, s * c * (rel - 1.0))


def survival_probability(theta, phi):
    theta = check_mixing_angle(theta)
    phi = check_phase(phi)
    return 1.0 - np.sin(2 * theta) ** 2 * np.sin(phi) ** 2


def transition_probability(theta, phi):
    theta = check_mixing_angle(theta)
    phi = check_phase(phi)
    return np.sin(2 * theta) ** 2 * np.sin(phi) ** 2


def build_density_matrix(theta, phi):
    """X-structured pure state for mixing angle ``theta`` and phase ``phi``.

    Returns a complex array of shape ``broadcast(theta, phi).shape + (4, 4)``
    whose only nonzero entries are rho22, rho33 and rho23 = conj(rho32)
    (1-based labels; array indices 1 and 2).
    """
    theta = check_mixing_angle(theta)
    phi = check_phase(phi)
    theta, phi = np.broadcast_arrays(theta, phi)
    s2t = np.sin(2 * theta)
    sphi, cphi = np.sin(phi), np.cos(phi)
    rho33 = s2t**2 * sphi**2
    rho23 = s2t * (-np.cos(2 * theta) * sphi**2 - 1j * sphi * cphi)

    rho = np.zeros(theta.shape + (4, 4), dtype=complex)
    rho[..., 1, 1] = 1.0 - rho33
    rho[..., 2, 2] = rho33
    rho[..., 1, 2] = rho23
    rho[..., 2, 1] = np.conj(rho23)
    return rho
