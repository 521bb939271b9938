"""Pfaffian and real-SVD validation.

Independent oracles: numpy.linalg.det through Pf(A)^2 = det(A), and the
combinatorial pair-partition sum for cross-validation of the elimination
algorithm.
"""

import numpy as np
import pytest

from fgdistill.linalg import as_antisymmetric, pair_partition_pfaffian, pfaffian, real_svd


def random_antisymmetric(n, rng, complex_entries=False):
    a = rng.standard_normal((n, n))
    if complex_entries:
        a = a + 1j * rng.standard_normal((n, n))
    return a - a.T


class TestPfaffian:
    def test_two_by_two(self):
        assert pfaffian(np.array([[0.0, 1.0], [-1.0, 0.0]])) == 1.0

    def test_four_by_four_pair_partition_form(self):
        # Pf = a12 a34 - a13 a24 + a14 a23
        rng = np.random.default_rng(1)
        a, b, c, d, e, f = rng.standard_normal(6)
        m = np.array([
            [0, a, b, c],
            [-a, 0, d, e],
            [-b, -d, 0, f],
            [-c, -e, -f, 0],
        ])
        assert pfaffian(m) == pytest.approx(a * f - b * e + c * d, rel=1e-12)

    def test_squared_equals_determinant_8x8(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a = random_antisymmetric(8, rng)
            det = np.linalg.det(a)
            assert pfaffian(a) ** 2 == pytest.approx(det, rel=1e-10)

    def test_squared_equals_determinant_property(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = 2 * int(rng.integers(1, 6))
            a = random_antisymmetric(n, rng)
            assert pfaffian(a) ** 2 == pytest.approx(np.linalg.det(a), rel=1e-9)

    def test_congruence_transformation(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = 2 * int(rng.integers(1, 5))
            a = random_antisymmetric(n, rng)
            b = rng.standard_normal((n, n))
            expected = np.linalg.det(b) * pfaffian(a)
            assert pfaffian(b @ a @ b.T) == pytest.approx(expected, rel=1e-9)

    def test_elimination_matches_pair_partition(self):
        rng = np.random.default_rng(5)
        for n in (2, 4, 6, 8, 10):
            a = random_antisymmetric(n, rng)
            assert pfaffian(a) == pytest.approx(pair_partition_pfaffian(a), rel=1e-12)

    def test_complex_matrices(self):
        rng = np.random.default_rng(6)
        for n in (2, 4, 6):
            a = random_antisymmetric(n, rng, complex_entries=True)
            assert pfaffian(a) ** 2 == pytest.approx(np.linalg.det(a), rel=1e-9)
            assert pfaffian(a) == pytest.approx(pair_partition_pfaffian(a), rel=1e-10)

    def test_odd_dimension_is_zero(self):
        rng = np.random.default_rng(7)
        a = random_antisymmetric(5, rng)
        assert pfaffian(a) == 0.0
        assert pair_partition_pfaffian(a) == 0.0

    def test_empty_matrix(self):
        assert pfaffian(np.zeros((0, 0))) == 1.0

    def test_structurally_singular(self):
        # rank-deficient antisymmetric matrix has Pfaffian exactly zero
        a = np.zeros((4, 4))
        a[0, 1], a[1, 0] = 1.0, -1.0
        assert pfaffian(a) == 0.0

    def test_rejects_non_antisymmetric(self):
        a = np.array([[0.0, 1.0], [-1.0, 0.0]])
        a[0, 0] = 1e-6
        with pytest.raises(ValueError, match="antisymmetric"):
            pfaffian(a)

    def test_pair_partition_dimension_guard(self):
        rng = np.random.default_rng(8)
        with pytest.raises(ValueError, match="limited"):
            pair_partition_pfaffian(random_antisymmetric(14, rng))

    def test_symmetrization_cleans_small_noise(self):
        rng = np.random.default_rng(9)
        a = random_antisymmetric(6, rng)
        noisy = a + 1e-14 * rng.standard_normal((6, 6))
        cleaned = as_antisymmetric(noisy)
        assert np.max(np.abs(cleaned + cleaned.T)) == 0.0


class TestRealSvd:
    def test_identity(self):
        u_a, s, u_b = real_svd(np.eye(4))
        np.testing.assert_allclose(s, np.ones(4))

    def test_already_diagonal(self):
        y = np.diag([0.9, 0.9, 0.3, 0.3])
        _, s, _ = real_svd(y)
        np.testing.assert_allclose(s, [0.9, 0.9, 0.3, 0.3], atol=1e-14)

    def test_antisymmetric_input_has_paired_singular_values(self):
        rng = np.random.default_rng(10)
        y = random_antisymmetric(6, rng)
        _, s, _ = real_svd(y)
        assert s[0] == pytest.approx(s[1], rel=1e-10)
        assert s[2] == pytest.approx(s[3], rel=1e-10)
        assert s[4] == pytest.approx(s[5], rel=1e-10)

    def test_factors_orthogonal_and_reconstruct(self):
        rng = np.random.default_rng(11)
        y = rng.standard_normal((6, 8))
        u_a, s, u_b = real_svd(y)
        np.testing.assert_allclose(u_a.T @ u_a, np.eye(6), atol=1e-12)
        np.testing.assert_allclose(u_b.T @ u_b, np.eye(8), atol=1e-12)
        sigma = np.zeros((6, 8))
        sigma[:6, :6] = np.diag(s)
        err = np.linalg.norm(u_a @ sigma @ u_b.T - y)
        assert err < 1e-10 * np.linalg.norm(y)

    def test_descending_order(self):
        rng = np.random.default_rng(12)
        _, s, _ = real_svd(rng.standard_normal((5, 5)))
        assert np.all(np.diff(s) <= 0)
