import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from kreinbounds.angles import (
    angle_from_angular_operator,
    angle_norms,
    angle_report,
    operator_angle,
)
from kreinbounds.core import KreinSignature, Subspace, coordinate_subspace, graph_subspace
from kreinbounds.errors import DimensionMismatch
from kreinbounds.instances import DISPOSITIONS, centered_gap_instance, random_instance
from kreinbounds.riccati import solve_riccati_contractive


def _defining_formula(x, q):
    """``arcsin(sqrt(eig(I - X* Q Q* X)))`` straight from the definition."""
    m = np.eye(x.shape[1]) - x.conj().T @ q @ q.conj().T @ x
    mu = np.clip(np.linalg.eigvalsh(0.5 * (m + m.conj().T)), 0.0, 1.0)
    return np.sort(np.arcsin(np.sqrt(mu)))


def _random_k(seed, n0, n1, norm):
    rng = np.random.default_rng(seed)
    k = rng.standard_normal((n1, n0)) + 1j * rng.standard_normal((n1, n0))
    return k * norm / np.linalg.norm(k, 2)


def test_identical_subspaces():
    sub = Subspace.from_columns(np.eye(4)[:, :2] + 0.3)
    np.testing.assert_array_equal(operator_angle(sub, sub) <= 1e-15, True)


def test_diagonal_line():
    h0 = Subspace(np.array([[1.0], [0.0]]))
    diag = Subspace(np.array([[1.0], [1.0]]) / math.sqrt(2))
    assert operator_angle(h0, diag)[0] == pytest.approx(math.pi / 4, abs=1e-15)


def test_centered_gap_angle():
    inst = centered_gap_instance(d=2.0, b=1.0)
    sol = solve_riccati_contractive(inst)
    sig = inst.sig
    graph = Subspace.from_columns(np.vstack([np.eye(1), sol.k]))
    theta = operator_angle(coordinate_subspace(sig, 0), graph)
    assert theta[0] == pytest.approx(0.4636476090, abs=1e-10)
    np.testing.assert_allclose(theta, _defining_formula(np.eye(3)[:, :1], graph.basis), atol=1e-12)


def test_angular_operator_examples():
    np.testing.assert_array_equal(angle_from_angular_operator(np.zeros((2, 3))), 0.0)
    assert angle_from_angular_operator([[1.0]])[0] == pytest.approx(math.pi / 4)
    th = angle_from_angular_operator([[0.0, -(2 - math.sqrt(3))]])
    np.testing.assert_allclose(th, [0.0, math.pi / 12], atol=1e-15)


class TestNorms:
    def test_exact_values(self):
        t, s2, t2 = angle_norms([0.0, math.pi / 12])
        assert t == pytest.approx(2 - math.sqrt(3), abs=1e-15)
        assert s2 == pytest.approx(0.5, abs=1e-15)
        assert t2 == pytest.approx(1 / math.sqrt(3), abs=1e-15)

    def test_zeros(self):
        assert angle_norms([0.0, 0.0]) == (0.0, 0.0, 0.0)

    def test_boundary(self):
        assert angle_norms([math.pi / 4])[2] == math.inf

    def test_sin2_is_max_over_angles(self):
        # sin(2 * 1.4) < sin(2 * 0.7): the max is not attained at the largest angle
        assert angle_norms([0.7, 1.4])[1] == pytest.approx(math.sin(1.4))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.floats(0.0, 0.99), st.integers(0, 2**32 - 1))
def test_two_routes_agree(n0, n1, norm, seed):
    sig = KreinSignature(n0, n1)
    k = _random_k(seed, n0, n1, norm)
    theta = operator_angle(coordinate_subspace(sig, 0), graph_subspace(k, sig, over=0))
    np.testing.assert_allclose(theta, angle_from_angular_operator(k), atol=1e-9)
    assert np.all((theta >= 0) & (theta <= math.pi / 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_matches_scipy_subspace_angles(n, p, q, seed):
    rng = np.random.default_rng(seed)
    p, q = min(p, n), min(q, n)
    a = Subspace.from_columns(rng.standard_normal((n, p)) + 1j * rng.standard_normal((n, p)))
    b = Subspace.from_columns(rng.standard_normal((n, q)) + 1j * rng.standard_normal((n, q)))
    theta = operator_angle(a, b)
    ref = np.sort(sla.subspace_angles(a.basis, b.basis))
    assert theta.size == p
    # dimension count forces p + q - n shared directions; scipy only resolves
    # those to about sqrt(eps), so check them directly
    shared = max(0, p + q - n)
    assert np.all(theta[:shared] <= 1e-12)
    np.testing.assert_allclose(theta[shared:ref.size], ref[shared:], atol=1e-9)
    # directions of a that b cannot reach
    np.testing.assert_allclose(theta[ref.size:], math.pi / 2, atol=1e-12)


def test_ambient_mismatch():
    with pytest.raises(DimensionMismatch):
        operator_angle(Subspace(np.eye(2)[:, :1]), Subspace(np.eye(3)[:, :1]))


def test_report_invariants():
    rng = np.random.default_rng(3)
    for i in range(30):
        n0, n1 = (int(x) for x in rng.integers(2, 6, 2))
        inst = random_instance(rng, n0, n1, 1.0, 0.45, DISPOSITIONS[i % 3])
        sol = solve_riccati_contractive(inst)
        rep = angle_report(inst, sol)
        assert rep.theta0.size == n0 and rep.theta1.size == n1
        assert rep.theta0.max() < math.pi / 4
        assert abs(rep.theta0.max() - rep.theta1.max()) <= 1e-9
        assert abs(rep.norm_tan - sol.norm_k) <= 1e-9
        assert set(rep.to_dict()) == {"theta0", "theta1", "norm_tan", "norm_sin2", "norm_tan2"}
