import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from kreinbounds.core import (build_instance, definiteness_margin, graph_subspace, krein_cross_gram,
                              krein_gram)
from kreinbounds.errors import (
    HypothesesNotMet,
    NoDefiniteInvariantSubspace,
    NonRealSpectrum,
)
from kreinbounds.instances import (
    DISPOSITIONS,
    centered_gap_instance,
    random_instance,
    scalar_instance,
    two_level_gap_instance,
)
from kreinbounds.riccati import (
    commutation_defect,
    dual_residual,
    dual_solution,
    psd_sqrt,
    riccati_residual,
    solve_riccati_contractive,
    solve_riccati_newton,
    sqrt_one_minus,
    transformed_riccati_residual,
)


def _ensemble(seed, count, norm_v=0.3):
    rng = np.random.default_rng(seed)
    for i in range(count):
        disposition = DISPOSITIONS[i % 3]
        n0, n1 = (int(x) for x in rng.integers(2, 5, 2))
        yield random_instance(rng, n0, n1, 1.0, norm_v, disposition)


class TestExamples:
    def test_two_level_gap(self):
        inst = two_level_gap_instance(d=4.0, b=1.0)
        sol = solve_riccati_contractive(inst)
        np.testing.assert_allclose(sol.k, [[0.0, -(2 - math.sqrt(3))]], atol=1e-14)
        assert riccati_residual(sol.k, inst) <= 1e-12
        assert dual_residual(dual_solution(sol.k), inst) <= 1e-12

    def test_two_level_gap_matches_pairing_scan(self):
        inst = two_level_gap_instance(d=4.0, b=1.0)
        scan = solve_riccati_contractive(inst, method="exhaustive")
        auto = solve_riccati_contractive(inst)
        np.testing.assert_allclose(scan.k, auto.k, atol=1e-13)

    def test_scalar_quadratic_root(self):
        inst = scalar_instance(d=2.0, b=0.6)
        sol = solve_riccati_contractive(inst)
        # contractive root of b K^2 - d K + b = 0
        b, d = 0.6, 2.0
        root = (d - math.sqrt(d * d - 4 * b * b)) / (2 * b)
        assert sol.k[0, 0] == pytest.approx(root, abs=1e-14)
        assert sol.norm_k == pytest.approx(1 / 3, abs=1e-14)
        assert sol.z0[0, 0] == pytest.approx(-0.8, abs=1e-14)
        assert sol.z1[0, 0] == pytest.approx(0.8, abs=1e-14)
        assert transformed_riccati_residual(sol, inst) <= 1e-14

    def test_centered_gap_dual(self):
        inst = centered_gap_instance(d=2.0, b=1.0)
        sol = solve_riccati_contractive(inst)
        assert sol.norm_k == pytest.approx(0.5, abs=1e-12)
        assert dual_residual(dual_solution(sol.k), inst) <= 1e-12

    def test_zero_coupling(self):
        inst = build_instance(np.diag([-1.0, -2.0]), [[1.0]], np.zeros((2, 1)))
        sol = solve_riccati_contractive(inst)
        assert np.abs(sol.k).max() == 0.0
        np.testing.assert_allclose(sol.t, np.eye(3), atol=1e-15)
        np.testing.assert_allclose(sol.lambda0, inst.a0, atol=1e-15)
        np.testing.assert_allclose(sol.lambda1, inst.a1, atol=1e-15)
        assert transformed_riccati_residual(sol, inst) == 0.0


class TestResidual:
    def test_zero_k(self):
        inst = two_level_gap_instance()
        assert riccati_residual(np.zeros((1, 2)), inst) == pytest.approx(np.linalg.norm(inst.b))

    def test_first_order_perturbation(self, rng):
        inst = two_level_gap_instance()
        k = solve_riccati_contractive(inst).k
        res = riccati_residual(k + 1e-6 * rng.standard_normal(k.shape), inst)
        assert 1e-8 < res < 1e-4


class TestSolutionInvariants:
    @pytest.mark.parametrize("norm_v", [0.1, 0.3, 0.45])
    def test_invariants(self, norm_v):
        for inst in _ensemble(1, 30, norm_v):
            sol = solve_riccati_contractive(inst)
            nb = inst.norm_b
            assert sol.norm_k < 1
            assert sol.residual <= 1e-9 * nb * (1 + sol.norm_k) ** 2 + 1e-14
            assert transformed_riccati_residual(sol, inst) <= 1e-9
            assert dual_residual(dual_solution(sol.k), inst) <= 1e-9 * (1 + nb)
            lmat = inst.matrix
            assert sol.diagonalization_defect(inst) <= 1e-8 * np.linalg.norm(lmat)
            for lam, z in ((sol.lambda0, sol.z0), (sol.lambda1, sol.z1)):
                assert np.abs(lam - lam.conj().T).max() <= 1e-9
                np.testing.assert_allclose(np.linalg.eigvalsh(lam),
                                           np.sort(np.linalg.eigvals(z).real), atol=1e-8)

    def test_graphs_are_invariant_and_krein_orthogonal(self):
        for inst in _ensemble(2, 20):
            sol = solve_riccati_contractive(inst)
            lmat = inst.matrix
            sig = inst.sig
            pos = graph_subspace(sol.k, sig, over=0)
            neg = graph_subspace(sol.k.conj().T, sig, over=1)
            for sub in (pos, neg):
                p = sub.projector()
                leak = (np.eye(sig.dim) - p) @ lmat @ p
                assert np.linalg.norm(leak, 2) <= 1e-9 * np.linalg.norm(lmat, 2)
            assert np.abs(krein_cross_gram(pos, neg, sig)).max() <= 1e-10
            assert definiteness_margin(pos, sig) > 0
            assert np.linalg.eigvalsh(krein_gram(neg, sig))[-1] < 0

    def test_square_root_intertwining(self):
        for inst in _ensemble(3, 20):
            k = solve_riccati_contractive(inst).k
            lhs = psd_sqrt(np.eye(inst.n1) - k @ k.conj().T) @ k
            rhs = k @ psd_sqrt(np.eye(inst.n0) - k.conj().T @ k)
            assert np.abs(lhs - rhs).max() <= 1e-10

    def test_regrouping_is_idempotent(self):
        for inst in _ensemble(4, 20):
            sol = solve_riccati_contractive(inst)
            again = solve_riccati_contractive(inst, partition=(sol.sigma0_prime, sol.sigma1_prime))
            np.testing.assert_allclose(again.k, sol.k, atol=1e-10)


class TestAlternativeRoutes:
    @pytest.mark.parametrize("method", ["krein_sign", "exhaustive", "enclosure"])
    def test_methods_agree(self, method):
        for inst in _ensemble(5, 15):
            ref = solve_riccati_contractive(inst)
            other = solve_riccati_contractive(inst, method=method)
            np.testing.assert_allclose(other.k, ref.k, atol=1e-9)

    def test_newton_agrees(self):
        for inst in _ensemble(6, 15):
            ref = solve_riccati_contractive(inst)
            newton = solve_riccati_newton(inst)
            np.testing.assert_allclose(newton.k, ref.k, atol=1e-9)

    def test_large_perturbation_uses_krein_sign(self):
        # ||V|| beyond d/2, but the spectrum stays real and definite
        inst = build_instance(np.diag([-3.0, -1.0]), np.diag([1.0, 3.0]), 0.7 * np.eye(2))
        sol = solve_riccati_contractive(inst)
        assert sol.norm_k < 1
        assert sol.residual <= 1e-9


class TestErrors:
    def test_non_real_spectrum(self):
        with pytest.raises(NonRealSpectrum):
            solve_riccati_contractive(build_instance([[-0.5]], [[0.5]], [[0.8]]))

    def test_general_mode(self):
        inst = build_instance([[-1.0]], [[1.0]], [[0.1]], [[0.1]], mode="general")
        with pytest.raises(HypothesesNotMet):
            solve_riccati_contractive(inst)

    def test_exhaustive_size_limit(self):
        inst = build_instance(np.diag(np.arange(7.0)) - 10, np.diag(np.arange(7.0)), np.zeros((7, 7)))
        with pytest.raises(NoDefiniteInvariantSubspace):
            solve_riccati_contractive(inst, method="exhaustive")

    def test_no_definite_subspace(self):
        # L is a 2x2 Jordan block at 0; its eigenvector is Krein-neutral
        inst = build_instance([[-1.0]], [[1.0]], [[1.0]])
        for method in ("auto", "krein_sign", "exhaustive"):
            with pytest.raises((NoDefiniteInvariantSubspace, NonRealSpectrum)):
                solve_riccati_contractive(inst, method=method)


def _series_sqrt_one_minus(m, terms=200):
    """Binomial series of ``(I - m)^(1/2)``, valid for ``||m|| < 1``."""
    out = np.zeros_like(m)
    power = np.eye(m.shape[0], dtype=complex)
    for k in range(terms):
        out = out + binom(0.5, k) * (-1) ** k * power
        power = power @ m
    return out


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.floats(0.05, 0.5), st.integers(0, 2**32 - 1))
def test_commutation_against_series(p, q, target, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((p, q)) + 1j * rng.standard_normal((p, q))
    n = rng.standard_normal((q, p)) + 1j * rng.standard_normal((q, p))
    s = math.sqrt(target / max(np.linalg.norm(m @ n, 2), np.linalg.norm(n @ m, 2)))
    m, n = s * m, s * n
    np.testing.assert_allclose(sqrt_one_minus(n @ m), _series_sqrt_one_minus(n @ m), atol=1e-12)
    assert commutation_defect(m, n, _series_sqrt_one_minus) <= 1e-12
    assert commutation_defect(m, n) <= 1e-10
