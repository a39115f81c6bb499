"""Brute-force two-qubit toolkit used as ground truth for the closed forms.

Nothing here assumes X-structure: partial transposes are index swaps,
spectra come from a cyclic Jacobi diagonalisation, and steering quantities are
built from Pauli-projector measurement statistics.  Every function accepts a
single ``(4, 4)`` matrix or a batch ``(..., 4, 4)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import StructureError

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def _as_batch(m):
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (4, 4):
        raise StructureError(f"expected (..., 4, 4) matrices, got shape {m.shape}")
    return m


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def partial_transpose(rho):
    """Transpose on subsystem B (second tensor factor)."""
    rho = _as_batch(rho)
    lead = rho.shape[:-2]
    r = rho.reshape(lead + (2, 2, 2, 2))  # a, b, a', b'
    return np.swapaxes(r, -3, -1).reshape(lead + (4, 4))


def hermitian_eigh(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic complex Jacobi diagonalisation of Hermitian 4x4 matrices.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending along
    the last axis and eigenvectors as columns, so ``m = V diag(w) V^dagger``.
    """
    a = _as_batch(m).copy()
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if np.max(np.abs(a - dagger(a)), initial=0.0) > 1e-10 * scale:
        raise StructureError("matrix is not Hermitian")
    a = 0.5 * (a + dagger(a))
    lead = a.shape[:-2]
    v = np.broadcast_to(np.eye(4, dtype=complex), a.shape).copy()
    off_mask = ~np.eye(4, dtype=bool)

    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[..., off_mask]) ** 2, axis=-1))
        if np.all(off < tol * scale):
            break
        for p in range(3):
            for q in range(p + 1, 4):
                apq = a[..., p, q]
                b = np.abs(apq)
                active = b > 0.0
                safe_b = np.where(active, b, 1.0)
                # phase that makes the (p, q) element real and positive
                phase = np.where(active, np.conj(apq) / safe_b, 1.0)
                app = a[..., p, p].real
                aqq = a[..., q, q].real
                zeta = (aqq - app) / (2.0 * safe_b)
                t = np.sign(zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta**2))
                t = np.where(zeta == 0.0, 1.0, t)
                c = 1.0 / np.sqrt(1.0 + t**2)
                s = t * c
                c = np.where(active, c, 1.0)
                s = np.where(active, s, 0.0)

                rot = np.broadcast_to(np.eye(4, dtype=complex), lead + (4, 4)).copy()
                rot[..., p, p] = c
                rot[..., p, q] = s
                rot[..., q, p] = -s * phase
                rot[..., q, q] = c * phase
                a = dagger(rot) @ a @ rot
                v = v @ rot
    else:
        raise StructureError("Jacobi iteration did not converge")

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    return w, v


def hermitian_eigenvalues(m):
    """Ascending eigenvalues of Hermitian 4x4 matrices."""
    return hermitian_eigh(m)[0]


def trace_norm(m):
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return np.sum(np.abs(hermitian_eigenvalues(m)), axis=-1)


def _projectors(axis):
    sigma = PAULI[axis]
    eye = np.eye(2, dtype=complex)
    return (eye + sigma) / 2, (eye - sigma) / 2  # outcomes +1, -1


@dataclass(frozen=True)
class MeasurementDistribution:
    """Joint outcome statistics of measuring the same Pauli axis on both qubits.

    ``joint[..., a, b]`` is the probability of outcome ``a`` on A and ``b`` on
    B, index 0 meaning +1 and 1 meaning -1.
    """

    axis: str
    joint: np.ndarray

    @property
    def marginal_a(self):
        return self.joint.sum(axis=-1)

    @property
    def marginal_b(self):
        return self.joint.sum(axis=-2)


def measurement_distribution(rho, axis):
    if axis not in PAULI:
        raise ValueError(f"axis must be one of 'x', 'y', 'z', got {axis!r}")
    rho = _as_batch(rho)
    projs = _projectors(axis)
    joint = np.empty(rho.shape[:-2] + (2, 2))
    for i, pa in enumerate(projs):
        for j, pb in enumerate(projs):
            joint[..., i, j] = np.real(np.einsum("...ij,ji->...", rho, np.kron(pa, pb)))
    return MeasurementDistribution(axis, joint)


def shannon_entropy(p, axis=-1):
    """Base-2 Shannon entropy with ``0 log 0 = 0``."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return np.sum(terms, axis=axis)


def conditional_entropy(dist, given="A"):
    """``H(B|A)`` (``given="A"``) or ``H(A|B)`` from a joint distribution."""
    lead = dist.joint.shape[:-2]
    h_joint = shannon_entropy(dist.joint.reshape(lead + (4,)))
    marginal = dist.marginal_a if given == "A" else dist.marginal_b
    return h_joint - shannon_entropy(marginal)


def steering_entropy_oracle(rho, direction="AB"):
    """``6 - 2 sum_j H(sigma_j^target | sigma_j^source)`` over the three Pauli axes.

    ``direction="AB"`` conditions on A's outcomes, ``"BA"`` on B's.
    """
    given = {"AB": "A", "BA": "B"}[direction]
    total = sum(conditional_entropy(measurement_distribution(rho, ax), given) for ax in "xyz")
    return 6.0 - 2.0 * total


def reduced_state(rho, keep="A"):
    """Partial trace of a two-qubit state, keeping subsystem ``keep``."""
    r = _as_batch(rho).reshape(np.shape(rho)[:-2] + (2, 2, 2, 2))
    if keep == "A":
        return np.einsum("...ajbj->...ab", r)
    return np.einsum("...iaib->...ab", r)


def apply_kraus(rho, operators):
    """``sum_k K rho K^dagger`` for operators of shape ``(..., k, 4, 4)``."""
    rho = _as_batch(rho)
    ops = np.asarray(operators, dtype=complex)
    return np.einsum("...kij,...jl,...kml->...im", ops, rho, np.conj(ops))
