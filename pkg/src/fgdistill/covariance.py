"""Covariance-matrix calculus for bipartite quasifree (Gaussian) fermion states.

Conventions
-----------
A system carries ``d_A`` modes on Alice's side and ``d_B`` on Bob's.  Each
mode ``m`` owns two self-adjoint field (Majorana) operators

    x_m = (c_m + c_m*) / sqrt(2),     p_m = i (c_m - c_m*) / sqrt(2),

and the doubled-space basis is ordered

    [A_x(1..d_A), A_p(1..d_A), B_x(1..d_B), B_p(1..d_B)].

In this basis the antiunitary conjugation of the self-dual formalism acts
as entrywise complex conjugation, and a quasifree state is determined by
one real antisymmetric matrix ``M`` through

    S = (1 + i M) / 2,     S_kj = tr(rho m_k m_j),

with the physicality constraint that all singular values of ``M`` lie in
[0, 1].  Pure states satisfy ``M^2 = -1``.

Sign conventions for the two Pfaffian-valued quantities of interest are
tied to the basis ordering above and are pinned by regression tests
against the dense Fock-space reference (:mod:`fgdistill.dense`):

* equal-parity probability:  p = (1 + Pf(M)) / 2,
* overlap with a maximally entangled projection P (orthogonal matrix R):
  <psi_P, rho psi_P> = parity(P) * Pf(M + M_P) / 4**d,
  where parity(P) = (-1)**d * det(R) = +-1 is the joint parity sector of
  psi_P (+1 for the equal-parity class used by distillation).
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_antisymmetric, pfaffian, real_svd

logger = logging.getLogger(__name__)

__all__ = [
    "CovarianceMatrix",
    "BasisProjection",
    "CovarianceReport",
    "validate_covariance",
    "mode_doubled_indices",
    "covariance_from_two_point",
    "wick_moment",
    "equal_parity_probability",
    "standard_projection",
    "conjugate_projection",
    "fidelity",
    "bogolubov_transform",
    "normal_form",
    "restrict_modes",
    "optimal_fidelity_product",
    "save_covariance",
    "load_covariance",
]

#: Antisymmetry tolerance on construction.
ANTISYM_TOL = 1e-12
#: Singular values of M may overshoot 1 by at most this much; smaller
#: overshoots are projected back, larger ones are hard errors.
SPECTRUM_OVERSHOOT_TOL = 1e-9
#: Clamp magnitudes above this are logged as warnings.
CLAMP_LOG_TOL = 1e-9
#: Purity test tolerance on |M^2 + 1|.
PURITY_TOL = 1e-9


def mode_doubled_indices(d_a, d_b):
    """Doubled-space index pair (x, p) owned by each mode.

    Returns an integer array of shape ``(d_a + d_b, 2)``; row ``m`` holds
    the global positions of ``x_m`` and ``p_m`` in the basis ordering
    documented in the module docstring.
    """
    out = np.empty((d_a + d_b, 2), dtype=int)
    for m in range(d_a):
        out[m] = (m, d_a + m)
    for m in range(d_b):
        out[d_a + m] = (2 * d_a + m, 2 * d_a + d_b + m)
    return out


def _project_spectrum(m):
    """Clip the singular values of an antisymmetric matrix to <= 1."""
    vals, vecs = np.linalg.eigh(1j * m)
    vals = np.clip(vals, -1.0, 1.0)
    projected = (vecs * vals) @ vecs.conj().T
    return np.real(-1j * projected)


class CovarianceMatrix:
    """Quasifree-state covariance in the fixed doubled-space basis.

    Parameters
    ----------
    d_a, d_b : int
        Mode counts on Alice's and Bob's side.
    m : array_like
        Real antisymmetric matrix of size ``2 (d_a + d_b)``.  Antisymmetry
        violations up to ``ANTISYM_TOL`` are symmetrized away; singular
        values may overshoot 1 by at most ``SPECTRUM_OVERSHOOT_TOL`` and
        are projected back onto the physical set.

    Raises
    ------
    ValueError
        On shape mismatch, antisymmetry violation, or unphysical spectrum.
    """

    def __init__(self, d_a, d_b, m):
        if d_a < 0 or d_b < 0 or d_a + d_b < 1:
            raise ValueError(f"invalid mode counts ({d_a}, {d_b})")
        m = np.asarray(m)
        if np.iscomplexobj(m):
            if np.max(np.abs(m.imag)) > ANTISYM_TOL:
                raise ValueError("covariance matrix M must be real")
            m = m.real
        m = np.asarray(m, dtype=float)
        dim = 2 * (d_a + d_b)
        if m.shape != (dim, dim):
            raise ValueError(f"expected M of shape {(dim, dim)}, got {m.shape}")
        m = as_antisymmetric(m, tol=ANTISYM_TOL, symmetrize=True)
        top = np.linalg.norm(m, 2)
        if top > 1.0 + SPECTRUM_OVERSHOOT_TOL:
            raise ValueError(
                f"covariance spectrum violation: largest singular value "
                f"{top:.12g} exceeds 1 beyond tolerance"
            )
        if top > 1.0:
            m = _project_spectrum(m)
            m = (m - m.T) / 2
        m.setflags(write=False)
        self.d_a = d_a
        self.d_b = d_b
        self.m = m

    # -- block accessors (Alice-Alice, Alice-Bob, Bob-Bob) --

    @property
    def dim(self):
        return 2 * (self.d_a + self.d_b)

    @property
    def x_block(self):
        """Alice-Alice block of M (antisymmetric)."""
        k = 2 * self.d_a
        return self.m[:k, :k]

    @property
    def y_block(self):
        """Alice-Bob block of M; its singular values measure entanglement."""
        k = 2 * self.d_a
        return self.m[:k, k:]

    @property
    def z_block(self):
        """Bob-Bob block of M (antisymmetric)."""
        k = 2 * self.d_a
        return self.m[k:, k:]

    @property
    def s_matrix(self):
        """Complex covariance operator S = (1 + iM) / 2."""
        return (np.eye(self.dim) + 1j * self.m) / 2

    @property
    def is_pure(self):
        """True iff M^2 = -1 within ``PURITY_TOL``."""
        residual = np.max(np.abs(self.m @ self.m + np.eye(self.dim)))
        return residual <= PURITY_TOL

    def __repr__(self):
        return f"CovarianceMatrix(d_a={self.d_a}, d_b={self.d_b})"


@dataclass(frozen=True)
class CovarianceReport:
    """Outcome of :func:`validate_covariance`: per-invariant residuals."""

    ok: bool
    violations: tuple = field(default_factory=tuple)
    residuals: dict = field(default_factory=dict)

    def __str__(self):
        if self.ok:
            return "ok"
        lines = [f"{name}: residual {self.residuals[name]:.3e}" for name in self.violations]
        return "violations: " + "; ".join(lines)


def validate_covariance(m, d_a, d_b):
    """Diagnostic check of the covariance invariants for a raw matrix.

    Unlike the :class:`CovarianceMatrix` constructor this never raises;
    every violated invariant is reported with its numerical residual.
    """
    m = np.asarray(m)
    dim = 2 * (d_a + d_b)
    residuals = {}
    if m.shape != (dim, dim):
        return CovarianceReport(False, ("shape",), {"shape": float("nan")})
    if np.iscomplexobj(m):
        residuals["realness"] = float(np.max(np.abs(m.imag)))
        m = m.real
    else:
        residuals["realness"] = 0.0
    scale = max(1.0, float(np.max(np.abs(m))))
    residuals["antisymmetry"] = float(np.max(np.abs(m + m.T)))
    m_skew = (m - m.T) / 2
    residuals["positivity"] = max(0.0, float(np.linalg.norm(m_skew, 2)) - 1.0)
    violations = []
    if residuals["realness"] > ANTISYM_TOL:
        violations.append("realness")
    if residuals["antisymmetry"] > ANTISYM_TOL * scale:
        violations.append("antisymmetry")
    if residuals["positivity"] > SPECTRUM_OVERSHOOT_TOL:
        violations.append("positivity")
    return CovarianceReport(not violations, tuple(violations), residuals)


def covariance_from_two_point(g, d_a, d_b):
    """Covariance from a particle-number-conserving two-point matrix.

    Parameters
    ----------
    g : array_like
        Real symmetric matrix ``g[m, n] = <c_m* c_n>`` over the
        ``d_a + d_b`` sites (Alice sites first), with all pairing
        expectations ``<c c>`` vanishing.
    """
    g = np.asarray(g, dtype=float)
    n_sites = d_a + d_b
    if g.shape != (n_sites, n_sites):
        raise ValueError(f"expected two-point matrix of shape {(n_sites, n_sites)}")
    if np.max(np.abs(g - g.T)) > 1e-10:
        raise ValueError("two-point matrix must be symmetric")
    k = 2 * g - np.eye(n_sites)
    idx = mode_doubled_indices(d_a, d_b)
    xs, ps = idx[:, 0], idx[:, 1]
    m = np.zeros((2 * n_sites, 2 * n_sites))
    m[np.ix_(xs, ps)] = k
    m[np.ix_(ps, xs)] = -k.T
    return CovarianceMatrix(d_a, d_b, m)


# ---------------------------------------------------------------------------
# Moments, parity, fidelity
# ---------------------------------------------------------------------------


def wick_moment(cov, vectors):
    """Expectation value of a product of field operators B(f_1) ... B(f_k).

    Every moment of a quasifree state reduces to the Pfaffian of the
    matrix of ordered two-point functions; moments of an odd number of
    fields vanish identically.

    Parameters
    ----------
    cov : CovarianceMatrix
    vectors : sequence of array_like
        Doubled-space vectors (may be complex), each of length ``cov.dim``.

    Returns
    -------
    scalar
        The moment; exactly 0.0 for an odd number of vectors.
    """
    vectors = [np.asarray(v) for v in vectors]
    for v in vectors:
        if v.shape != (cov.dim,):
            raise ValueError(f"field vector has shape {v.shape}, expected ({cov.dim},)")
    if len(vectors) % 2 == 1:
        return 0.0
    if not vectors:
        return 1.0
    f = np.column_stack(vectors)
    gram = f.T @ cov.s_matrix @ f
    upper = np.triu(gram, 1)
    skew = upper - upper.T
    return pfaffian(skew, validate=False)


def equal_parity_probability(cov):
    """Probability that a joint local-parity measurement gives equal outcomes.

    Requires ``d_a == d_b``.  Evaluated as a single real Pfaffian of M;
    the sign convention is tied to the module's basis ordering and is
    regression-tested against the dense reference.
    """
    if cov.d_a != cov.d_b:
        raise ValueError(
            f"equal-parity probability requires d_a == d_b, got ({cov.d_a}, {cov.d_b})"
        )
    p = (1.0 + pfaffian(cov.m, validate=False)) / 2.0
    clamped = min(1.0, max(0.0, p))
    if abs(clamped - p) > CLAMP_LOG_TOL:
        logger.warning("equal-parity probability clamped by %.3e", abs(clamped - p))
    return clamped


@dataclass(frozen=True)
class BasisProjection:
    """Covariance of a pure maximally entangled quasifree state.

    Determined by a real orthogonal matrix ``r`` of size ``2 d``; the
    induced covariance has X = Z = 0 and Y = r, and is automatically a
    projection (P^2 = P).
    """

    d: int
    r: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        if r.shape != (2 * self.d, 2 * self.d):
            raise ValueError(f"expected R of shape {(2 * self.d,) * 2}, got {r.shape}")
        if np.max(np.abs(r.T @ r - np.eye(2 * self.d))) > 1e-10:
            raise ValueError("R must be orthogonal (residual above 1e-10)")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def sector_parity(self):
        """Joint parity sector of the projected state: +1 (equal) or -1."""
        sign, _ = np.linalg.slogdet(self.r)
        return int(round((-1) ** self.d * sign))

    def covariance(self):
        """The induced :class:`CovarianceMatrix` (a pure state)."""
        k = 2 * self.d
        m = np.zeros((2 * k, 2 * k))
        m[:k, k:] = self.r
        m[k:, :k] = -self.r.T
        return CovarianceMatrix(self.d, self.d, m)

    def conjugate(self):
        """Projection of the partner state psi_- (off-diagonal sign flipped)."""
        return BasisProjection(self.d, -self.r)


def standard_projection(d):
    """The reference maximally entangled projection on ``d + d`` modes.

    The orthogonal matrix is diagonal with entries +1 except for a single
    -1 in the last slot when ``d`` is odd; the sign pattern places the
    state in the equal-parity sector for every ``d`` (regression-tested
    against the dense reference).
    """
    if d < 1:
        raise ValueError("need at least one mode per side")
    r = np.eye(2 * d)
    r[-1, -1] = (-1) ** d
    return BasisProjection(d, r)


def conjugate_projection(d):
    """Projection realizing the partner state psi_- of :func:`standard_projection`."""
    return standard_projection(d).conjugate()


def fidelity(cov, proj):
    """Overlap <psi_P, rho psi_P> between a quasifree state and psi_P.

    Evaluated as ``parity(P) * Pf(M + M_P) / 4**d``; see the module
    docstring for the sign convention.  The result is clamped to [0, 1]
    and clamps above ``CLAMP_LOG_TOL`` are logged.
    """
    if cov.d_a != cov.d_b or cov.d_a != proj.d:
        raise ValueError(
            f"dimension mismatch: state ({cov.d_a}, {cov.d_b}) vs projection d={proj.d}"
        )
    d = proj.d
    a = cov.m + proj.covariance().m
    raw = proj.sector_parity * pfaffian(a, validate=False) / 4.0**d
    clamped = min(1.0, max(0.0, raw))
    if abs(clamped - raw) > CLAMP_LOG_TOL:
        logger.warning("fidelity clamped by %.3e", abs(clamped - raw))
    return clamped


# ---------------------------------------------------------------------------
# Local Bogolubov transformations, normal form, mode restriction
# ---------------------------------------------------------------------------


def bogolubov_transform(cov, u_a, u_b):
    """Apply the local Bogolubov transformation M -> u M u^T, u = u_a (+) u_b.

    ``u_a`` and ``u_b`` must be real orthogonal of sizes ``2 d_a`` and
    ``2 d_b``; real orthogonality is exactly the condition for a local
    mode transformation to be implemented by a unitary on each side.
    """
    u_a = np.asarray(u_a, dtype=float)
    u_b = np.asarray(u_b, dtype=float)
    for u, k, side in ((u_a, 2 * cov.d_a, "u_a"), (u_b, 2 * cov.d_b, "u_b")):
        if u.shape != (k, k):
            raise ValueError(f"{side} must have shape {(k, k)}, got {u.shape}")
        if np.max(np.abs(u.T @ u - np.eye(k))) > 1e-8:
            raise ValueError(f"{side} is not orthogonal (residual above 1e-8)")
    k = 2 * cov.d_a
    u = np.zeros((cov.dim, cov.dim))
    u[:k, :k] = u_a
    u[k:, k:] = u_b
    return CovarianceMatrix(cov.d_a, cov.d_b, u @ cov.m @ u.T)


def _pair_interleave(d):
    """Row order putting the j-th descending singular-value pair on mode j."""
    return np.r_[0 : 2 * d : 2, 1 : 2 * d : 2]


def normal_form(cov):
    """Rotate the state so the Alice-Bob block Y becomes diagonal.

    Uses the real SVD of Y.  Both rotations are proper (determinant +1),
    which keeps the local parity sectors intact; when det(Y) < 0 the
    leftover sign is carried by the smallest singular value, whose
    diagonal entry comes out negative.

    The diagonal is arranged so that mode ``j`` owns the j-th descending
    pair of singular values: entry ``j`` holds the (2j)-th and entry
    ``d + j`` the (2j+1)-th largest.  Truncating to the first ``n`` modes
    per side therefore keeps exactly the ``2 n`` largest singular values.

    Returns
    -------
    (CovarianceMatrix, ndarray, ndarray)
        The rotated state and the two orthogonal factors ``(u_a, u_b)``.
    """
    u, s, v = real_svd(cov.y_block)
    u_a = u.T[_pair_interleave(cov.d_a)]
    u_b = v.T[_pair_interleave(cov.d_b)]
    if np.linalg.slogdet(u_a)[0] < 0:
        u_a[-1] *= -1.0
    if np.linalg.slogdet(u_b)[0] < 0:
        u_b[-1] *= -1.0
    return bogolubov_transform(cov, u_a, u_b), u_a, u_b


def restrict_modes(cov, keep_a, keep_b):
    """Covariance of the state after discarding all modes not kept.

    Discarding modes is the partial trace; on covariances it is the
    principal submatrix on the doubled-space indices of the kept modes.

    Parameters
    ----------
    keep_a, keep_b : sequence of int
        Mode indices (0-based) to keep on each side; duplicates and
        out-of-range indices are rejected.
    """
    keep_a = list(keep_a)
    keep_b = list(keep_b)
    for keep, d, side in ((keep_a, cov.d_a, "Alice"), (keep_b, cov.d_b, "Bob")):
        if len(set(keep)) != len(keep):
            raise ValueError(f"duplicate mode index in {side} selection")
        if any(not (0 <= int(i) == i < d) for i in keep):
            raise ValueError(f"{side} mode selection out of range for d={d}")
    if not keep_a and not keep_b:
        raise ValueError("cannot discard every mode")
    idx = mode_doubled_indices(cov.d_a, cov.d_b)
    sel = (
        [idx[m, 0] for m in keep_a]
        + [idx[m, 1] for m in keep_a]
        + [idx[cov.d_a + m, 0] for m in keep_b]
        + [idx[cov.d_a + m, 1] for m in keep_b]
    )
    sub = cov.m[np.ix_(sel, sel)]
    return CovarianceMatrix(len(keep_a), len(keep_b), sub)


def optimal_fidelity_product(cov, hypothesis_tol=1e-9):
    """Best overlap with any maximally entangled projection, in closed form.

    Valid for states in normal form (Y diagonal) whose X or Z block
    vanishes and whose diagonal sign pattern matches the one of
    :func:`standard_projection`; when it does, the optimum over all
    orthogonal R is attained exactly there and equals the product of
    ``(1 + |y|) / 2`` over the diagonal of Y (each singular value counted
    with its multiplicity).

    Raises
    ------
    ValueError
        If the hypotheses are violated; compute :func:`fidelity` at an
        explicit projection instead.
    """
    if cov.d_a != cov.d_b:
        raise ValueError("closed form requires d_a == d_b")
    x_norm = np.max(np.abs(cov.x_block))
    z_norm = np.max(np.abs(cov.z_block))
    if min(x_norm, z_norm) > hypothesis_tol:
        raise ValueError(
            "closed form requires X = 0 or Z = 0; use fidelity() directly"
        )
    y = cov.y_block
    off = np.max(np.abs(y - np.diag(np.diag(y))))
    if off > hypothesis_tol:
        raise ValueError("closed form requires diagonal Y; bring the state "
                         "to normal form first")
    diag = np.diag(y)
    signs = np.diag(standard_projection(cov.d_a).r)
    if np.min(diag * signs) < -hypothesis_tol:
        raise ValueError(
            "diagonal of Y is not in the sector of the standard projection; "
            "use fidelity() directly"
        )
    return float(np.prod((1.0 + np.abs(diag)) / 2.0))


# ---------------------------------------------------------------------------
# Plain-text serialization
# ---------------------------------------------------------------------------


def save_covariance(cov, path):
    """Write a covariance to the plain-text format: `d_A d_B`, then M rows."""
    with open(path, "w", encoding="ascii") as handle:
        handle.write(f"{cov.d_a} {cov.d_b}\n")
        for row in cov.m:
            handle.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_covariance(path):
    """Read a covariance from the plain-text format written by :func:`save_covariance`."""
    with open(path, "r", encoding="ascii") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ValueError("covariance file must start with a `d_A d_B` header")
        d_a, d_b = int(header[0]), int(header[1])
        rows = [line.split() for line in handle if line.strip()]
    dim = 2 * (d_a + d_b)
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValueError(f"expected {dim} rows of {dim} entries after the header")
    m = np.array([[float(v) for v in row] for row in rows])
    return CovarianceMatrix(d_a, d_b, m)
