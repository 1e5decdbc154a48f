import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kreinbounds.core import (
    GAP,
    GENERIC,
    SUBORDINATED,
    KreinSignature,
    Subspace,
    angular_operator,
    build_instance,
    classify_disposition,
    coordinate_subspace,
    definiteness_margin,
    dump_instance,
    enumerate_separating_gaps,
    graph_margin_formula,
    graph_subspace,
    instance_from_dict,
    j_orthogonal_complement,
    krein_cross_gram,
    krein_inner,
    load_instance,
    set_distance,
)
from kreinbounds.errors import DimensionMismatch, NotHermitian, NotUniformlyDefinite, SetsIntersect

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def _cplx(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _contraction(rng, n1, n0, norm):
    k = _cplx(rng, n1, n0)
    return k * norm / np.linalg.norm(k, 2)


class TestBuildInstance:
    def test_c_is_minus_b_star(self):
        inst = build_instance(np.eye(2), [[3.0]], [[1 + 1j], [2.0]])
        np.testing.assert_allclose(inst.c, -inst.b.conj().T)
        assert inst.matrix.shape == (3, 3)

    def test_j_times_l_is_hermitian(self, rng):
        a0 = _cplx(rng, 3, 3)
        a1 = _cplx(rng, 2, 2)
        inst = build_instance(a0 + a0.conj().T, a1 + a1.conj().T, _cplx(rng, 3, 2))
        jl = inst.sig.matrix @ inst.matrix
        np.testing.assert_allclose(jl, jl.conj().T, atol=1e-13)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            build_instance([[0, 1], [0, 0]], [[1.0]], [[0.0], [0.0]])

    def test_rejects_bad_shapes(self):
        with pytest.raises(DimensionMismatch):
            build_instance(np.eye(2), [[1.0]], [[1.0, 2.0]])
        with pytest.raises(DimensionMismatch):
            build_instance(np.ones((2, 3)), [[1.0]], [[1.0], [1.0]])

    def test_general_mode_needs_c(self):
        with pytest.raises(ValueError):
            build_instance([[0.0]], [[1.0]], [[1.0]], mode="general")
        inst = build_instance([[0.0]], [[1.0]], [[1.0]], [[0.2j]], mode="general")
        assert inst.c[0, 0] == 0.2j

    def test_json_round_trip(self, rng, tmp_path):
        a0 = _cplx(rng, 2, 2)
        inst = build_instance(a0 + a0.conj().T, [[1.5]], _cplx(rng, 2, 1))
        path = tmp_path / "inst.json"
        dump_instance(inst, path)
        back = load_instance(path)
        np.testing.assert_array_equal(back.matrix, inst.matrix)
        data = json.loads(path.read_text())
        assert data["mode"] == "j_self_adjoint"

    def test_json_rejects_ragged(self):
        with pytest.raises(DimensionMismatch):
            instance_from_dict({"n0": 1, "n1": 1, "a0": [[1]], "a1": [[[0, 0]]], "b": [[[0, 0]]]})
        with pytest.raises(DimensionMismatch):
            instance_from_dict({"n0": 1, "n1": 1, "a0": [[[0, 0]]], "b": [[[0, 0]]]})


class TestKreinGeometry:
    def test_inner_product_convention(self):
        sig = KreinSignature(1, 1)
        assert krein_inner([1j, 0], [1, 0], sig) == 1j
        assert krein_inner([0, 1], [0, 1], sig) == -1

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.floats(0.0, 0.95), st.integers(0, 2**32 - 1))
    def test_graph_margin_lower_bound(self, n0, n1, norm, seed):
        rng = np.random.default_rng(seed)
        sig = KreinSignature(n0, n1)
        k = _contraction(rng, n1, n0, norm)
        sub = graph_subspace(k, sig, over=0)
        assert definiteness_margin(sub, sig) >= graph_margin_formula(norm) - 1e-10

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.floats(0.0, 0.9), st.integers(0, 2**32 - 1))
    def test_complement_is_adjoint_graph(self, n0, n1, norm, seed):
        rng = np.random.default_rng(seed)
        sig = KreinSignature(n0, n1)
        k = _contraction(rng, n1, n0, norm)
        sub = graph_subspace(k, sig, over=0)
        comp = j_orthogonal_complement(sub, sig)
        assert comp.dim == n1
        assert np.abs(krein_cross_gram(sub, comp, sig)).max() < 1e-10
        np.testing.assert_allclose(angular_operator(comp, sig, over=1), k.conj().T, atol=1e-10)

    def test_angular_operator_round_trip(self, rng):
        sig = KreinSignature(3, 2)
        k = _contraction(rng, 2, 3, 0.7)
        np.testing.assert_allclose(angular_operator(graph_subspace(k, sig), sig), k, atol=1e-12)

    def test_complement_needs_positive_subspace(self):
        sig = KreinSignature(1, 1)
        with pytest.raises(NotUniformlyDefinite):
            j_orthogonal_complement(coordinate_subspace(sig, 1), sig)

    def test_subspace_requires_orthonormal_basis(self):
        with pytest.raises(ValueError):
            Subspace(np.array([[1.0], [1.0]]))

    def test_coordinate_subspaces(self):
        sig = KreinSignature(2, 1)
        assert definiteness_margin(coordinate_subspace(sig, 0), sig) == 1.0
        assert coordinate_subspace(sig, 1).dim == 1


class TestDisposition:
    @pytest.mark.parametrize("s0, s1, kind, gap0, gap1", [
        ([0, 1], [3, 4], SUBORDINATED, True, True),
        ([5], [3, 7], GAP, True, False),
        ([0, 10], [3, 4], GAP, False, True),
        ([0, 5], [3, 7], GENERIC, False, False),
    ])
    def test_kinds(self, s0, s1, kind, gap0, gap1):
        disp = classify_disposition(s0, s1)
        assert (disp.kind, disp.gap0, disp.gap1) == (kind, gap0, gap1)

    def test_intersecting_sets(self):
        with pytest.raises(SetsIntersect):
            classify_disposition([0, 1], [1, 2])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(finite, min_size=1, max_size=6), st.lists(finite, min_size=1, max_size=6))
    def test_distance_matches_brute_force(self, s0, s1):
        brute = min(abs(a - b) for a in s0 for b in s1)
        assert set_distance(s0, s1) == pytest.approx(brute, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(finite, min_size=1, max_size=6, unique=True),
           st.lists(finite, min_size=1, max_size=6, unique=True))
    def test_kind_matches_hull_definition(self, s0, s1):
        if set_distance(s0, s1) < 1e-6:
            return
        disp = classify_disposition(s0, s1)
        assert disp.gap0 == all(x < min(s0) or x > max(s0) for x in s1)
        assert disp.gap1 == all(x < min(s1) or x > max(s1) for x in s0)
        assert disp.has_gap == (disp.kind != GENERIC)

    def test_separating_gaps(self):
        assert enumerate_separating_gaps([0, 1, 5], [3]) == [(1.0, 3.0), (3.0, 5.0)]
