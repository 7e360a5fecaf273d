import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from modules import cmatrix
from modules.errors import DimensionMismatchError, InvalidStateError

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, dim=None):
    n = dim or draw(st.integers(min_value=1, max_value=5))
    re = draw(st.lists(finite, min_size=n * n, max_size=n * n))
    im = draw(st.lists(finite, min_size=n * n, max_size=n * n))
    return (np.array(re) + 1j * np.array(im)).reshape(n, n)


@st.composite
def hermitian_matrices(draw):
    m = draw(complex_matrices())
    return 0.5 * (m + m.conj().T)


@st.composite
def antihermitian_traceless_2x2(draw):
    d, x, y = draw(finite), draw(finite), draw(finite)
    z = x + 1j * y
    return np.array([[1j * d, z], [-np.conj(z), -1j * d]])


class TestValidation:
    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatchError):
            cmatrix.as_matrix([[1, 2, 3], [4, 5, 6]])

    def test_rejects_empty(self):
        with pytest.raises(DimensionMismatchError):
            cmatrix.as_matrix(np.zeros((0, 0)))

    def test_rejects_nan(self):
        with pytest.raises(InvalidStateError):
            cmatrix.as_matrix([[1.0, math.nan], [0.0, 1.0]])

    def test_vector_rejects_inf(self):
        with pytest.raises(InvalidStateError):
            cmatrix.as_vector([1.0, math.inf])

    def test_mismatched_product(self):
        with pytest.raises(DimensionMismatchError):
            cmatrix.mul(np.eye(2), np.eye(3))

    def test_mismatched_commutator(self):
        with pytest.raises(DimensionMismatchError):
            cmatrix.commutator(np.eye(2), np.eye(3))


class TestAlgebra:
    def test_pauli_commutator(self):
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1.0 + 0j, -1.0])
        assert np.allclose(cmatrix.commutator(sx, sy), 2j * sz)

    @given(complex_matrices(dim=3), complex_matrices(dim=3))
    def test_commutator_is_antisymmetric(self, a, b):
        assert np.allclose(cmatrix.commutator(a, b), -cmatrix.commutator(b, a))

    @given(complex_matrices(dim=3), complex_matrices(dim=3))
    def test_commutator_is_traceless(self, a, b):
        assert abs(cmatrix.trace(cmatrix.commutator(a, b))) <= 1e-9

    @given(hermitian_matrices(), hermitian_matrices())
    def test_commutator_of_hermitians_is_antihermitian(self, h, r):
        if h.shape != r.shape:
            return
        assert cmatrix.is_antihermitian_traceless(cmatrix.commutator(h, r), tol=1e-9)

    def test_adjoint_and_trace(self):
        m = np.array([[1 + 2j, 3], [4j, 5]])
        assert np.array_equal(cmatrix.adjoint(m), np.array([[1 - 2j, -4j], [3, 5]]))
        assert cmatrix.trace(m) == 6 + 2j

    def test_hermitian_predicate(self):
        assert cmatrix.is_hermitian(np.array([[1, 1j], [-1j, 2]]))
        assert not cmatrix.is_hermitian(np.array([[1, 1j], [1j, 2]]))


class TestJacobi:
    @settings(max_examples=60, deadline=None)
    @given(hermitian_matrices())
    def test_matches_numpy_eigenvalues(self, h):
        values, vectors = cmatrix.jacobi_eigh(h)
        scale = max(1.0, float(np.max(np.abs(h))))
        assert np.allclose(values, np.linalg.eigvalsh(h), atol=1e-10 * scale)
        assert np.allclose(vectors.conj().T @ vectors, np.eye(h.shape[0]), atol=1e-10)

    def test_diagonal_input_is_returned_sorted(self):
        values, _ = cmatrix.jacobi_eigh(np.diag([3.0, -1.0, 2.0]).astype(complex))
        assert list(values) == [-1.0, 2.0, 3.0]


class TestOperatorNorm:
    def test_zero_matrix(self):
        assert cmatrix.operator_norm(np.zeros((2, 2), dtype=complex)) == 0.0

    def test_diagonal_antihermitian(self):
        assert cmatrix.operator_norm(np.diag([1j * 0.7, -1j * 0.7])) == pytest.approx(0.7, abs=1e-15)

    @given(antihermitian_traceless_2x2())
    def test_fast_path_equals_largest_singular_value(self, a):
        assert cmatrix.operator_norm(a) == pytest.approx(cmatrix.largest_singular_value(a), rel=1e-10, abs=1e-10)
        assert cmatrix.operator_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10, abs=1e-10)

    def test_half_trace_formula_is_not_used_for_general_matrices(self):
        m = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        assert cmatrix.operator_norm(m) == pytest.approx(1.0)
        assert cmatrix.half_trace_norm(m) == pytest.approx(math.sqrt(0.5))

    @settings(max_examples=60, deadline=None)
    @given(complex_matrices())
    def test_general_norm_matches_svd(self, m):
        expected = float(np.linalg.svd(m, compute_uv=False)[0])
        assert cmatrix.operator_norm(m) == pytest.approx(expected, rel=1e-9, abs=1e-9)

    def test_three_by_three_antihermitian_uses_jacobi(self):
        a = 1j * np.diag([2.0, -1.0, -1.0])
        assert cmatrix.operator_norm(a) == pytest.approx(2.0)
        assert cmatrix.half_trace_norm(a) != pytest.approx(2.0)

    def test_vector_norm(self):
        assert cmatrix.vector_norm(np.array([3.0, 4j])) == pytest.approx(5.0)


def random_antihermitian_traceless(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = 0.5 * (m - m.conj().T)
    return a - np.trace(a) / n * np.eye(n)


class TestNormProperties:
    @settings(max_examples=60, deadline=None)
    @given(complex_matrices())
    def test_adjoint_has_the_same_norm(self, m):
        assert cmatrix.operator_norm(cmatrix.adjoint(m)) == pytest.approx(cmatrix.operator_norm(m), rel=1e-12, abs=1e-12)

    def test_norm_scales_with_modulus(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(1, 6))
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            c = complex(*rng.normal(scale=5.0, size=2))
            assert cmatrix.operator_norm(c * m) == pytest.approx(abs(c) * cmatrix.operator_norm(m), rel=1e-12, abs=1e-12)

    def test_half_trace_formula_holds_for_random_2x2(self):
        rng = np.random.default_rng(20261018)
        for _ in range(1000):
            a = random_antihermitian_traceless(rng, 2)
            assert cmatrix.half_trace_norm(a) == pytest.approx(cmatrix.largest_singular_value(a), rel=1e-12)

    def test_half_trace_formula_fails_for_random_3x3(self):
        rng = np.random.default_rng(7)
        gaps = []
        for _ in range(20):
            a = random_antihermitian_traceless(rng, 3)
            norm = cmatrix.operator_norm(a)
            assert norm == pytest.approx(float(np.linalg.svd(a, compute_uv=False)[0]), rel=1e-10)
            gaps.append(abs(cmatrix.half_trace_norm(a) - norm) / norm)
        assert max(gaps) > 1e-3
