import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hv2q.config import NumericalError
from hv2q.linalg import (
    EX,
    EY,
    EZ,
    I2,
    SX,
    SY,
    SZ,
    expectation,
    hermitian_eig,
    is_hermitian,
    is_unitary,
    orthogonal_to,
    pauli_components,
    pauli_from_vector,
    rotation_from_unitary,
    safe_arccos,
    sigma_dot,
    svd_2x2,
    tensor_product,
    unitary_exp,
)

from strategies import unit_vectors


class TestPauliAlgebra:
    def test_commutators(self):
        assert np.allclose(SX @ SY - SY @ SX, 2j * SZ)
        assert np.allclose(SY @ SZ - SZ @ SY, 2j * SX)
        assert np.allclose(SZ @ SX - SX @ SZ, 2j * SY)

    def test_squares_are_identity(self):
        for p in (SX, SY, SZ):
            assert np.array_equal(p @ p, I2)

    @given(unit_vectors())
    def test_dichotomic_spectrum(self, a):
        w = np.linalg.eigvalsh(pauli_from_vector(0.3, 1.7, a))
        assert np.allclose(w, [0.3 - 1.7, 0.3 + 1.7], atol=1e-12)

    def test_non_unit_axis_rejected(self):
        with pytest.raises(ValueError):
            pauli_from_vector(0.0, 1.0, [1.0, 1.0, 0.0])

    @given(unit_vectors(), st.floats(-3, 3))
    def test_components_roundtrip(self, a, c0):
        m = c0 * I2 + sigma_dot(2.0 * a)
        got0, got = pauli_components(m)
        assert np.isclose(got0, c0) and np.allclose(got, 2.0 * a)


class TestTensorProduct:
    def test_hand_expansion(self):
        a = np.array([[1, 2], [3, 4]], dtype=complex)
        b = np.array([[0, 1j], [5, 6]], dtype=complex)
        expected = np.array([
            [0, 1j, 0, 2j],
            [5, 6, 10, 12],
            [0, 3j, 0, 4j],
            [15, 18, 20, 24],
        ])
        assert np.array_equal(tensor_product(a, b), expected)

    def test_mixed_product(self, rng):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = tensor_product(a, b) @ tensor_product(c, d)
        assert np.allclose(lhs, tensor_product(a @ c, b @ d))


class TestSpectral:
    def test_eigenpairs(self, rng):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = z + z.conj().T
        w, v = hermitian_eig(h)
        assert np.all(np.diff(w) >= 0)
        assert np.allclose(h @ v, v * w, atol=1e-12)
        assert is_unitary(v)
        for k in range(4):
            first = v[np.argmax(np.abs(v[:, k]) > 1e-9), k]
            assert abs(first.imag) < 1e-12 and first.real > 0

    def test_unitary_exp_group_law(self, rng):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = 0.5 * (z + z.conj().T)
        u1, u2 = unitary_exp(h, 0.3), unitary_exp(h, 0.45)
        assert is_unitary(u1)
        assert np.allclose(u1 @ u2, unitary_exp(h, 0.75), atol=1e-12)
        assert np.allclose(unitary_exp(h, 0.0), np.eye(4))

    def test_unitary_exp_pauli_closed_form(self):
        t = 0.7
        expected = np.cos(t) * I2 - 1j * np.sin(t) * SZ
        assert np.allclose(unitary_exp(SZ, t), expected, atol=1e-14)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            unitary_exp(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)

    def test_imaginary_expectation_raises(self):
        psi = np.array([1, 1j]) / np.sqrt(2)
        with pytest.raises(NumericalError):
            expectation(psi, np.array([[0, 1], [0, 0]], dtype=complex))


class TestSVD:
    def test_reconstruction_and_order(self, rng):
        for _ in range(50):
            c = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            left, s, right = svd_2x2(c)
            assert s[0] >= s[1] >= 0
            assert np.allclose(left @ np.diag(s) @ right.conj().T, c, atol=1e-12)
            assert is_unitary(left) and is_unitary(right)

    def test_degenerate_singular_values(self):
        c = np.eye(2) / np.sqrt(2)
        left, s, right = svd_2x2(c)
        assert np.allclose(s, [1 / np.sqrt(2)] * 2)
        assert np.allclose(left @ np.diag(s) @ right.conj().T, c)


class TestRotation:
    def test_z_quarter_turn(self):
        # U = exp(-i sz pi/4): U^dagger sx U = -sy by direct multiplication
        u = unitary_exp(SZ, np.pi / 4)
        assert np.allclose(u.conj().T @ SX @ u, -SY)
        assert np.allclose(rotation_from_unitary(u) @ EX, -EY, atol=1e-14)
        v = unitary_exp(SZ, -np.pi / 4)
        assert np.allclose(rotation_from_unitary(v) @ EX, EY, atol=1e-14)

    @given(unit_vectors(), st.floats(0, 2 * np.pi))
    def test_conjugation_defines_rotation(self, axis, angle):
        u = unitary_exp(sigma_dot(axis), angle / 2)
        rot = rotation_from_unitary(u)
        assert np.allclose(rot @ rot.T, np.eye(3), atol=1e-12)
        assert np.isclose(np.linalg.det(rot), 1.0)
        for v in (EX, EY, EZ):
            assert np.allclose(u.conj().T @ sigma_dot(v) @ u, sigma_dot(rot @ v), atol=1e-12)


class TestHelpers:
    @given(unit_vectors())
    def test_orthogonal_to(self, b):
        p = orthogonal_to(b)
        assert abs(p @ b) < 1e-12 and np.isclose(np.linalg.norm(p), 1.0)

    def test_safe_arccos_clamps_rounding_only(self):
        assert safe_arccos(1.0 + 1e-13) == 0.0
        with pytest.raises(NumericalError):
            safe_arccos(1.0 + 1e-6)

    def test_is_hermitian(self):
        assert is_hermitian(SY)
        assert not is_hermitian(SX @ SY)
