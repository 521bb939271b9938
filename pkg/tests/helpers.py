"""Shared random-state constructors for the test suite."""

import numpy as np

from fgdistill import dense
from fgdistill.covariance import CovarianceMatrix, mode_doubled_indices, standard_projection


def vacuum_covariance(d_a, d_b):
    idx = mode_doubled_indices(d_a, d_b)
    m = np.zeros((2 * (d_a + d_b),) * 2)
    for x, p in idx:
        m[x, p] = -1.0
        m[p, x] = 1.0
    return CovarianceMatrix(d_a, d_b, m)


def random_x0_covariance(d, rng):
    """Random valid X = 0 state whose normal form matches the standard sign pattern."""
    signs = np.diag(standard_projection(d).r)
    while True:
        y_vals = np.sort(rng.uniform(0.0, 1.0, 2 * d))[::-1]
        u_a = dense.random_orthogonal(2 * d, rng)
        u_b = dense.random_orthogonal(2 * d, rng)
        if np.linalg.det(u_a) < 0:
            u_a[:, 0] *= -1
        if np.linalg.det(u_b) < 0:
            u_b[:, 0] *= -1
        y = u_a @ np.diag(y_vals * signs) @ u_b.T
        z = rng.standard_normal((2 * d, 2 * d))
        z = (z - z.T) / 2 * rng.uniform(0.0, 0.3)
        m = np.zeros((4 * d, 4 * d))
        m[: 2 * d, 2 * d:] = y
        m[2 * d:, : 2 * d] = -y.T
        m[2 * d:, 2 * d:] = z
        if np.linalg.norm(m, 2) <= 0.999:
            return CovarianceMatrix(d, d, m)
