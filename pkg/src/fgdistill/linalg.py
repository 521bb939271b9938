"""Dense linear algebra for antisymmetric (skew-symmetric) matrices.

Provides the Pfaffian of real or complex antisymmetric matrices via
Parlett-Reid tridiagonalization with partial pivoting, a combinatorial
pair-partition Pfaffian used as an independent reference in tests, and a
thin real-SVD wrapper with a fixed ordering convention.

The Pfaffian satisfies Pf(A)^2 = det(A) and Pf(B A B^T) = det(B) Pf(A);
both identities are exercised by the test suite.
"""

import numpy as np

__all__ = [
    "as_antisymmetric",
    "pfaffian",
    "pair_partition_pfaffian",
    "real_svd",
]

#: Antisymmetry validation tolerance (absolute, relative to matrix scale).
ANTISYMMETRY_TOL = 1e-12

#: Pivots below this magnitude are treated as structural zeros of the
#: Pfaffian.  Matches the singular cases produced by fidelity evaluations
#: at orthogonal projections.
PIVOT_TOL = 1e-13


def as_antisymmetric(a, tol=ANTISYMMETRY_TOL, symmetrize=True):
    """Validate that ``a`` is antisymmetric and return a clean copy.

    Parameters
    ----------
    a : array_like
        Square matrix, real or complex.
    tol : float
        Largest allowed antisymmetry violation, measured entrywise
        relative to ``max(1, |a|_max)``.
    symmetrize : bool
        If True, return ``(a - a.T) / 2``, removing accumulated float
        error from upstream products.

    Raises
    ------
    ValueError
        If ``a`` is not square or violates antisymmetry beyond ``tol``.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, np.max(np.abs(a)) if a.size else 0.0)
    residual = np.max(np.abs(a + a.T)) if a.size else 0.0
    if residual > tol * scale:
        raise ValueError(
            f"matrix is not antisymmetric: |A + A^T| residual {residual:.3e} "
            f"exceeds tolerance {tol * scale:.3e}"
        )
    if symmetrize:
        a = (a - a.T) / 2
    return a.copy()


def pfaffian(a, validate=True):
    """Pfaffian of an antisymmetric matrix.

    Uses skew-symmetric Parlett-Reid tridiagonalization with partial
    pivoting, O(n^3).  Row/column swaps flip the sign of the result and
    are tracked explicitly.  Works for real and complex matrices.

    Parameters
    ----------
    a : array_like
        Antisymmetric n x n matrix.
    validate : bool
        Check antisymmetry on entry (tolerance ``ANTISYMMETRY_TOL``).

    Returns
    -------
    scalar
        Pf(a).  Zero for odd n (no pair partition exists) and for
        structurally singular matrices (pivot below ``PIVOT_TOL``).
    """
    if validate:
        a = as_antisymmetric(a)
    else:
        a = np.array(a, copy=True)
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n % 2 == 1:
        return 0.0 * a[0, 0]

    if not np.iscomplexobj(a):
        a = a.astype(float)
    pf = a.dtype.type(1.0)
    scale = max(1.0, np.max(np.abs(a)))
    for k in range(0, n - 1, 2):
        # partial pivot: largest entry in column k below the diagonal
        col = np.abs(a[k + 1:, k])
        kp = k + 1 + int(np.argmax(col))
        if np.abs(a[kp, k]) < PIVOT_TOL * scale:
            return 0.0 * pf
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf = pf * pivot
        if k + 2 < n:
            # rank-2 antisymmetric update of the trailing block
            tau = a[k, k + 2:] / pivot
            col = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, col)
            a[k + 2:, k + 2:] -= np.outer(col, tau)
    return pf


def pair_partition_pfaffian(a, max_dim=12):
    """Pfaffian by direct summation over all pair partitions.

    Reference implementation with factorial cost; used only to
    cross-validate :func:`pfaffian` in tests.

    Raises
    ------
    ValueError
        If the dimension exceeds ``max_dim``.
    """
    a = as_antisymmetric(a)
    n = a.shape[0]
    if n > max_dim:
        raise ValueError(f"pair-partition Pfaffian limited to n <= {max_dim}, got {n}")
    if n == 0:
        return 1.0
    if n % 2 == 1:
        return 0.0 * a[0, 0]

    def expand(indices):
        # Pf over the submatrix on `indices`, expanding along the first row.
        if not indices:
            return 1.0
        first, rest = indices[0], indices[1:]
        total = 0.0
        for pos, j in enumerate(rest):
            sign = (-1) ** pos
            remaining = rest[:pos] + rest[pos + 1:]
            total = total + sign * a[first, j] * expand(remaining)
        return total

    return expand(tuple(range(n)))


def real_svd(y):
    """Singular value decomposition ``y = u_a @ diag(s) @ u_b.T`` of a real matrix.

    Returns
    -------
    u_a : ndarray
        Real orthogonal, shape (m, m).
    s : ndarray
        Singular values, nonnegative, sorted descending.
    u_b : ndarray
        Real orthogonal, shape (n, n).
    """
    y = np.asarray(y, dtype=float)
    u_a, s, vh = np.linalg.svd(y)
    return u_a, s, vh.T
