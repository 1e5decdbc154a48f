import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_hermite, factorial

from kreinbounds.enclosures import enclosure_radius
from kreinbounds.errors import ProfileNotOdd, QuadratureUnconverged
from kreinbounds.oscillator import (
    build_oscillator,
    coupling_matrix,
    hermite_functions,
    interior_eigenvalues,
    multiplicity,
    oscillator_report,
    quadrature_basis,
)


def _psi_closed_form(n, x):
    norm = math.sqrt(2.0 ** n * factorial(n) * math.sqrt(math.pi))
    return eval_hermite(n, x) * np.exp(-x * x / 2) / norm


def test_multiplicity():
    assert [multiplicity(n, 1) for n in range(5)] == [1] * 5
    assert multiplicity(2, 3) == 6
    assert multiplicity(0, 4) == 1
    with pytest.raises(ValueError):
        multiplicity(-1, 1)


class TestHermite:
    def test_values_at_zero(self):
        psi = hermite_functions([0.0], 2)
        assert psi[0, 0] == pytest.approx(0.7511255445, abs=1e-10)
        assert psi[0, 1] == 0.0

    def test_closed_form(self):
        x = np.linspace(-6, 6, 41)
        psi = hermite_functions(x, 12)
        for n in range(12):
            np.testing.assert_allclose(psi[:, n], _psi_closed_form(n, x), atol=1e-12)

    @pytest.mark.parametrize("m, nodes", [(32, 178), (64, 306), (128, 1124)])
    def test_quadrature_orthonormality(self, m, nodes):
        _, phi = quadrature_basis(m, nodes)
        assert np.abs(phi.T @ phi - np.eye(m)).max() <= 1e-10


class TestCoupling:
    def test_known_entry(self):
        g = coupling_matrix(8)
        assert g[0, 1] == pytest.approx(math.exp(-0.25) / math.sqrt(2), abs=1e-12)

    def test_against_adaptive_quadrature(self):
        g = coupling_matrix(8)
        for i, j in [(0, 3), (2, 5), (1, 6)]:
            val, _ = quad(lambda x: _psi_closed_form(i, x) * math.sin(x) * _psi_closed_form(j, x),
                          -np.inf, np.inf, epsabs=1e-13)
            assert g[i, j] == pytest.approx(val, abs=1e-11)

    def test_parity(self):
        g = coupling_matrix(32)
        same = (np.arange(32)[:, None] + np.arange(32)[None, :]) % 2 == 0
        assert np.abs(g[same]).max() <= 1e-14

    def test_rejects_even_profile(self):
        with pytest.raises(ProfileNotOdd):
            coupling_matrix(8, np.cos)

    def test_rejects_unbounded_profile(self):
        with pytest.raises(ValueError):
            coupling_matrix(8, lambda x: 2 * np.sin(x))

    def test_custom_profile(self):
        g = coupling_matrix(8, np.tanh)
        assert np.abs(g).max() > 0.1


class TestModel:
    def test_structure(self):
        model = build_oscillator(16, 0.2)
        inst = model.instance
        np.testing.assert_array_equal(np.diag(inst.a0).real, model.even_modes + 0.5)
        np.testing.assert_array_equal(np.diag(inst.a1).real, model.odd_modes + 0.5)
        assert np.abs(inst.b.real).max() == 0.0
        assert inst.mode == "j_self_adjoint"

    def test_norm_monotone_and_bounded(self):
        norms = [build_oscillator(m, 0.2).norm_v_trunc for m in (8, 16, 32, 64)]
        assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))
        assert norms[-1] <= 0.2 + 1e-10

    def test_zero_beta(self):
        model = build_oscillator(16, 0.0)
        rep = oscillator_report(model)
        assert rep.passed and rep.max_displacement == 0.0
        np.testing.assert_allclose(sorted(z[0] for z in rep.eigs), np.arange(16) + 0.5)

    def test_quadrature_certification(self):
        with pytest.raises(QuadratureUnconverged):
            build_oscillator(64, 0.2, quad_nodes=64)

    def test_report_beta_02(self):
        model = build_oscillator(64, 0.2)
        rep = oscillator_report(model)
        assert rep.regime == "angle" and rep.passed
        assert rep.real_ok and rep.enclosure_ok and rep.angle_ok
        # the spec-level radius uses ||b||_inf = beta; the report uses the smaller truncated norm
        assert rep.r_v_used <= enclosure_radius(0.2, 0.2, 1.0)
        assert rep.angle_bound_rhs <= math.pi / 2 * math.tan(0.5 * math.asin(0.4))

    def test_truncation_stability(self):
        small, big = build_oscillator(32, 0.2), build_oscillator(64, 0.2)
        e_small = interior_eigenvalues(small)
        e_big = np.sort_complex(np.linalg.eigvals(big.instance.matrix))[: e_small.size]
        assert np.abs(e_small - e_big).max() <= 1e-8

    @pytest.mark.parametrize("beta, regime", [(0.35, "reality"), (0.6, "observation")])
    def test_regimes(self, beta, regime):
        rep = oscillator_report(build_oscillator(32, beta))
        assert rep.regime == regime
        assert rep.passed
        if regime == "reality":
            assert rep.real_ok and rep.enclosure_ok
