"""Entropic steering, negativity and l1-coherence of X-structured two-qubit states.

Steering uses the closed form built from the ``I = 4p`` probability tables of
the three Pauli measurements::

    N = 1/2 sum_i [Ix_i log2 Ix_i + Iy_i log2 Iy_i + Iz_i log2 Iz_i]
        - sum_j sum_k Im_jk log2 Im_jk

with joint entries ``1 +/- 2 Re(rho23)`` (x and y) and ``4 rho_ii`` (z), and
marginals ``I = 2p`` of the conditioning party.  Rewriting the entropies
gives ``N = 6 - 2 sum_j H(sigma_j^B | sigma_j^A)``, so ``N > 2`` is exactly a
violation of the entropic steering inequality ``sum_j H(B|A) >= 2``.  The
normalised measure is ``S = max(0, (N - 2) / 4)``, equal to 1 on Bell states.

For this state family ``<sigma_y sigma_y> = 2 Re(rho23 - rho14)`` with
``rho14 = 0``, which is why the y table uses ``Re(rho23)`` and not ``Im``.
"""

from dataclasses import dataclass

import numpy as np

from . import oracle
from .errors import StructureError

STRUCTURE_TOL = 1e-12
LOG_CLIP_TOL = 1e-14
# |N - 2| below this is rounding noise on the no-steering boundary
STEERING_ZERO_TOL = 1e-12

# (row, col) entries that may be nonzero: diagonal 0..2 and the central coherence
_ALLOWED = np.zeros((4, 4), dtype=bool)
_ALLOWED[0, 0] = _ALLOWED[1, 1] = _ALLOWED[2, 2] = True
_ALLOWED[1, 2] = _ALLOWED[2, 1] = True


@dataclass(frozen=True)
class SteeringReport:
    n_ab: float
    n_ba: float
    s_ab: float
    s_ba: float
    asymmetry: float


@dataclass(frozen=True)
class ResourceTriple:
    steering: SteeringReport
    negativity: float
    coherence: float


def is_x_supported(rho, tol=STRUCTURE_TOL):
    """True where only rho11, rho22, rho33 and the rho23/rho32 coherence are nonzero."""
    rho = np.asarray(rho)
    return np.all(np.abs(rho[..., ~_ALLOWED]) <= tol, axis=-1)


def _require_x_support(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise StructureError(f"expected (..., 4, 4) matrices, got shape {rho.shape}")
    if not np.all(is_x_supported(rho)):
        raise StructureError(
            "closed forms need support on rho11, rho22, rho33 and rho23/rho32 only"
        )
    return rho


def _xlog2x(values):
    values = np.asarray(values, dtype=float)
    values = np.where(np.abs(values) < LOG_CLIP_TOL, 0.0, values)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(values > 0, values * np.log2(np.where(values > 0, values, 1.0)), 0.0)


def _probability_tables(rho):
    """Joint ``I^{AB}`` entries and the z marginals of A and B (``I = 2p``)."""
    r11 = rho[..., 0, 0].real
    r22 = rho[..., 1, 1].real
    r33 = rho[..., 2, 2].real
    re23 = rho[..., 1, 2].real

    plus, minus = 1 + 2 * re23, 1 - 2 * re23
    xy = np.stack([plus, plus, minus, minus], axis=-1)
    z = 4 * np.stack([rho[..., k, k].real for k in range(4)], axis=-1)
    d_a = r11 + r22 - r33
    d_b = r11 - r22 + r33
    marg_a = np.stack([1 + d_a, 1 - d_a], axis=-1)
    marg_b = np.stack([1 + d_b, 1 - d_b], axis=-1)
    return xy, z, marg_a, marg_b


def steering_quantity(rho, direction="AB"):
    """Entropic steering quantity ``N_AB`` or ``N_BA`` (2 on product states, 6 on Bell states)."""
    if direction not in ("AB", "BA"):
        raise ValueError(f"direction must be 'AB' or 'BA', got {direction!r}")
    rho = _require_x_support(rho)
    xy, z, marg_a, marg_b = _probability_tables(rho)
    joint = 0.5 * np.sum(2 * _xlog2x(xy) + _xlog2x(z), axis=-1)
    marginal = marg_a if direction == "AB" else marg_b
    # x and y marginals are uniform (I = 1) and contribute 1 log 1 = 0
    return joint - np.sum(_xlog2x(marginal), axis=-1)


def normalized_steering(n_value):
    excess = np.asarray(n_value, dtype=float) - 2.0
    excess = np.where(excess < STEERING_ZERO_TOL, 0.0, excess)
    return excess / 4.0


def steering(rho):
    n_ab = steering_quantity(rho, "AB")
    n_ba = steering_quantity(rho, "BA")
    s_ab = normalized_steering(n_ab)
    s_ba = normalized_steering(n_ba)
    return SteeringReport(n_ab, n_ba, s_ab, s_ba, np.abs(s_ab - s_ba))


def partial_transpose_min_eigenvalue(rho):
    """Smallest eigenvalue of the partial transpose.

    On the X family the partial transpose splits into the block
    ``[[rho11, rho23], [rho32, 0]]`` on ``|00>, |11>`` plus ``diag(rho22, rho33)``,
    giving ``rho11/2 +/- sqrt(rho11^2 + 4|rho23|^2)/2``.  With ``rho11 = 0``
    this is ``+/- |rho23|``.  Other inputs go through the Jacobi oracle.
    """
    rho = np.asarray(rho, dtype=complex)
    x_mask = is_x_supported(rho)
    if np.all(x_mask):
        r11 = rho[..., 0, 0].real
        c = np.abs(rho[..., 1, 2])
        lowest_block = 0.5 * r11 - 0.5 * np.sqrt(r11**2 + 4 * c**2)
        return np.minimum(lowest_block, np.minimum(rho[..., 1, 1].real, rho[..., 2, 2].real))
    return oracle.hermitian_eigenvalues(oracle.partial_transpose(rho))[..., 0]


def negativity(rho):
    """``max(0, -2 h_min)`` with ``h_min`` the lowest partial-transpose eigenvalue.

    This is the quantity usually labelled logarithmic negativity in this
    setting; arithmetically it equals ``||rho^T_B||_1 - 1`` for two qubits.
    """
    return np.maximum(0.0, -2.0 * partial_transpose_min_eigenvalue(rho))


def coherence_l1(rho):
    """Sum of moduli of all off-diagonal entries."""
    rho = np.asarray(rho, dtype=complex)
    off = ~np.eye(4, dtype=bool)
    return np.sum(np.abs(rho[..., off]), axis=-1)


def resource_triple(rho):
    report = steering(rho)
    neg = negativity(rho)
    steerable = (np.asarray(report.s_ab) > 0) | (np.asarray(report.s_ba) > 0)
    if np.any(steerable & (np.asarray(neg) <= 0)):
        raise AssertionError("steerable state reported with zero negativity")
    return ResourceTriple(report, neg, coherence_l1(rho))


MEASURE_COLUMNS = ("steering_ab", "steering_ba", "steering_asym", "log_negativity", "coherence_l1")

MEASURE_ALIASES = {
    "steering_ab": "steering_ab",
    "steering_ba": "steering_ba",
    "asymmetry": "steering_asym",
    "steering_asym": "steering_asym",
    "negativity": "log_negativity",
    "log_negativity": "log_negativity",
    "coherence": "coherence_l1",
    "coherence_l1": "coherence_l1",
}


def measure_table(rho, columns=MEASURE_COLUMNS):
    """Evaluate the requested measure columns; returns ``{column: array}``."""
    report = steering(rho)
    values = {
        "steering_ab": report.s_ab,
        "steering_ba": report.s_ba,
        "steering_asym": report.asymmetry,
        "log_negativity": negativity(rho),
        "coherence_l1": coherence_l1(rho),
    }
    return {col: np.asarray(values[col], dtype=float) for col in columns}
