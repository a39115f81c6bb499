import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import x_state
from nuentangle import oracle
from nuentangle.channels import apply_channel
from nuentangle.errors import StructureError
from nuentangle.measures import (
    coherence_l1,
    measure_table,
    negativity,
    resource_triple,
    steering,
    steering_quantity,
)
from nuentangle.state import build_density_matrix

thetas = st.floats(0, np.pi / 2)
phis = st.floats(0, np.pi)


class TestSteeringQuantity:
    def test_product_state(self, product):
        assert steering_quantity(product, "AB") == pytest.approx(2.0, abs=1e-12)
        assert steering_quantity(product, "BA") == pytest.approx(2.0, abs=1e-12)

    def test_bell_state(self, bell):
        assert steering_quantity(bell, "AB") == pytest.approx(6.0, abs=1e-12)

    def test_imaginary_coherence_invisible(self, imaginary_coherence):
        # Re(rho23) = 0 removes the x and y terms entirely
        assert steering_quantity(imaginary_coherence, "AB") == pytest.approx(2.0, abs=1e-12)

    def test_rejects_non_x_state(self):
        rho = np.eye(4, dtype=complex) / 4
        rho[0, 3] = rho[3, 0] = 0.1
        with pytest.raises(StructureError):
            steering_quantity(rho)

    def test_rejects_population_in_11(self):
        with pytest.raises(StructureError):
            steering_quantity(np.eye(4) / 4)

    def test_bad_direction(self, bell):
        with pytest.raises(ValueError):
            steering_quantity(bell, "AC")

    @given(thetas, phis, st.floats(0, 1), st.sampled_from(["ad", "pf", "pd"]))
    def test_matches_entropy_oracle(self, theta, phi, tau, kind):
        rho = apply_channel(build_density_matrix(theta, phi), kind, tau)
        for d in ("AB", "BA"):
            assert steering_quantity(rho, d) == pytest.approx(
                oracle.steering_entropy_oracle(rho, d), abs=1e-9
            )

    @given(st.floats(0, 1), st.floats(0, 1), st.floats(-1, 1), st.floats(-1, 1))
    def test_matches_oracle_on_general_x_states(self, a, b, u, v):
        # any physical state on rho11, rho22, rho33 with a central coherence
        w = np.array([a, b, 1.0]) / (a + b + 1.0)
        r23 = np.sqrt(w[1] * w[2]) * (u + 1j * v) / max(1.0, abs(u + 1j * v))
        rho = x_state(w[0], w[1], w[2], r23)
        for d in ("AB", "BA"):
            assert steering_quantity(rho, d) == pytest.approx(
                oracle.steering_entropy_oracle(rho, d), abs=1e-9
            )


class TestSteeringReport:
    def test_bell(self, bell):
        rep = steering(bell)
        assert rep.s_ab == pytest.approx(1.0, abs=1e-12)
        assert rep.s_ba == pytest.approx(1.0, abs=1e-12)
        assert rep.asymmetry == pytest.approx(0.0, abs=1e-12)

    def test_product(self):
        rep = steering(build_density_matrix(0.7, 0.0))
        assert rep.s_ab == 0.0 and rep.s_ba == 0.0

    def test_symmetric_without_damping(self, theta_phi_grid):
        theta, phi = theta_phi_grid
        for kind in ("pf", "pd"):
            for tau in (0.0, 0.3, 0.8):
                rep = steering(apply_channel(build_density_matrix(theta, phi), kind, tau))
                assert np.max(rep.asymmetry) < 1e-12

    @given(thetas, phis, st.floats(0, 1))
    def test_report_invariants(self, theta, phi, tau):
        rep = steering(apply_channel(build_density_matrix(theta, phi), "ad", tau))
        assert 0 <= rep.s_ab <= 1 + 1e-12
        assert 0 <= rep.s_ba <= 1 + 1e-12
        assert rep.s_ab == pytest.approx(max(0.0, (rep.n_ab - 2) / 4), abs=1e-12)
        assert rep.asymmetry == pytest.approx(abs(rep.s_ab - rep.s_ba), abs=1e-15)


class TestNegativity:
    def test_bell(self, bell):
        assert negativity(bell) == pytest.approx(1.0, abs=1e-12)

    def test_product(self, product):
        assert negativity(product) == 0.0

    def test_imaginary_coherence(self, imaginary_coherence):
        assert negativity(imaginary_coherence) == pytest.approx(1.0, abs=1e-12)

    def test_general_fallback(self):
        # Werner state p|psi-><psi-| + (1-p) I/4 is entangled above p = 1/3
        psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
        p = 0.6
        rho = p * np.outer(psi, psi) + (1 - p) * np.eye(4) / 4
        assert negativity(rho) == pytest.approx((3 * p - 1) / 2, abs=1e-12)

    @given(thetas, phis, st.floats(0, 1), st.sampled_from(["ad", "pf", "pd"]))
    def test_closed_form_matches_jacobi(self, theta, phi, tau, kind):
        rho = apply_channel(build_density_matrix(theta, phi), kind, tau)
        h_min = oracle.hermitian_eigenvalues(oracle.partial_transpose(rho))[0]
        assert negativity(rho) == pytest.approx(max(0.0, -2 * h_min), abs=1e-10)
        assert negativity(rho) == pytest.approx(
            oracle.trace_norm(oracle.partial_transpose(rho)) - 1, abs=1e-10
        )


class TestCoherence:
    def test_bell(self, bell):
        assert coherence_l1(bell) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal(self):
        assert coherence_l1(np.diag([0.1, 0.2, 0.3, 0.4])) == 0.0

    def test_phase_damped_bell(self, bell):
        assert coherence_l1(apply_channel(bell, "pd", 0.5)) == pytest.approx(0.5, abs=1e-12)

    def test_counts_every_off_diagonal(self):
        rho = np.eye(4, dtype=complex) / 4
        rho[0, 3] = rho[3, 0] = 0.1j
        assert coherence_l1(rho) == pytest.approx(0.2)


class TestResourceTriple:
    def test_bell(self, bell):
        r = resource_triple(bell)
        assert (r.steering.s_ab, r.negativity, r.coherence) == pytest.approx((1, 1, 1), abs=1e-12)

    def test_product(self, product):
        r = resource_triple(product)
        assert (r.steering.s_ab, r.negativity, r.coherence) == (0, 0, 0)

    def test_entangled_but_unsteerable(self, imaginary_coherence):
        r = resource_triple(imaginary_coherence)
        assert r.steering.s_ab == 0
        assert r.negativity == pytest.approx(1.0, abs=1e-12)
        assert r.coherence == pytest.approx(1.0, abs=1e-12)

    @given(thetas, phis, st.floats(0, 1))
    def test_steerable_implies_entangled(self, theta, phi, tau):
        r = resource_triple(apply_channel(build_density_matrix(theta, phi), "ad", tau))
        if r.steering.s_ab > 0:
            assert r.negativity > 1e-12


def test_negativity_equals_coherence_without_damping(theta_phi_grid):
    theta, phi = theta_phi_grid
    for kind in ("pf", "pd"):
        for tau in np.linspace(0, 1, 11):
            rho = apply_channel(build_density_matrix(theta, phi), kind, tau)
            assert np.max(np.abs(negativity(rho) - coherence_l1(rho))) < 1e-12


def test_measure_table_aliases_and_shapes(bell):
    table = measure_table(np.stack([bell, bell]))
    assert set(table) == {"steering_ab", "steering_ba", "steering_asym", "log_negativity", "coherence_l1"}
    assert all(v.shape == (2,) for v in table.values())
