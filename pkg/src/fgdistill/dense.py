"""Brute-force Fock-space reference implementation.

Everything here works with explicit operators on the full
2**L-dimensional Fock space and exists to verify the covariance-matrix
calculus at small mode counts.  Jordan-Wigner ordering is fixed with
Alice's modes first and mode 1 on the slowest (most significant) index;
this pins every sign convention the Gaussian formulas are regressed
against.  Efficiency is a non-goal.
"""

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .covariance import CovarianceMatrix, mode_doubled_indices

__all__ = [
    "dense_operators",
    "majorana_operators",
    "field_operator",
    "parity_operator",
    "parity_projectors",
    "dense_parity_probabilities",
    "dense_covariance",
    "dense_from_covariance",
    "bogolubov_unitary",
    "gaussian_dense_state",
    "dense_twirl",
    "dense_twirl_sampled",
    "finite_chain_ground_state",
    "finite_chain_two_point",
    "random_orthogonal",
    "random_covariance",
]

#: Fock-space mode cap; 2**14 is the largest dimension worth holding.
MAX_MODES = 14

_SM = scipy.sparse.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_SZ = scipy.sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
_ID = scipy.sparse.identity(2, format="csr")


def dense_operators(n_modes):
    """Annihilation operators c_1 .. c_L as sparse matrices.

    Jordan-Wigner construction: c_j = Z x ... x Z x sm x 1 x ... x 1 with
    j - 1 leading Z factors.  The anticommutation relations hold exactly.
    """
    if n_modes > MAX_MODES:
        raise ValueError(f"dense Fock space limited to {MAX_MODES} modes, got {n_modes}")
    if n_modes < 1:
        raise ValueError("need at least one mode")
    ops = []
    for j in range(n_modes):
        factors = [_SZ] * j + [_SM] + [_ID] * (n_modes - j - 1)
        op = factors[0]
        for f in factors[1:]:
            op = scipy.sparse.kron(op, f, format="csr")
        ops.append(op)
    return ops


def majorana_operators(d_a, d_b):
    """Self-adjoint fields w_g = sqrt(2) m_g in the doubled-basis order.

    Normalized so that {w_i, w_j} = 2 delta_ij; the list index g matches
    the doubled-space basis of :mod:`fgdistill.covariance`.
    """
    n_modes = d_a + d_b
    c = dense_operators(n_modes)
    idx = mode_doubled_indices(d_a, d_b)
    w = [None] * (2 * n_modes)
    for m in range(n_modes):
        cdag = c[m].conj().T
        w[idx[m, 0]] = c[m] + cdag
        w[idx[m, 1]] = 1j * (c[m] - cdag)
    return w


def field_operator(f, d_a, d_b):
    """The field B(F) = sum_g F_g m_g for a doubled-space vector F."""
    f = np.asarray(f)
    w = majorana_operators(d_a, d_b)
    if f.shape != (len(w),):
        raise ValueError(f"expected vector of length {len(w)}, got {f.shape}")
    total = f[0] / np.sqrt(2) * w[0]
    for g in range(1, len(w)):
        total = total + f[g] / np.sqrt(2) * w[g]
    return total


def parity_operator(n_modes, first=0, count=None):
    """Diagonal of (-1)**N over modes ``first .. first+count-1`` (all if None)."""
    if count is None:
        count = n_modes - first
    dim = 2**n_modes
    states = np.arange(dim)
    par = np.zeros(dim, dtype=int)
    for m in range(first, first + count):
        bit = (states >> (n_modes - 1 - m)) & 1
        par += bit
    return (-1.0) ** par


def parity_projectors(d_a, d_b):
    """Diagonals of the four joint parity projectors P^{jk}, keyed '++' etc."""
    n_modes = d_a + d_b
    theta_a = parity_operator(n_modes, 0, d_a)
    theta_b = parity_operator(n_modes, d_a, d_b)
    out = {}
    for ja, sa in (("+", 1.0), ("-", -1.0)):
        for jb, sb in (("+", 1.0), ("-", -1.0)):
            out[ja + jb] = (1 + sa * theta_a) / 2 * ((1 + sb * theta_b) / 2)
    return out


def dense_parity_probabilities(state, d_a, d_b):
    """Joint parity outcome probabilities (p++, p+-, p-+, p--) of a state."""
    proj = parity_projectors(d_a, d_b)
    weights = _diagonal_weights(state)
    return tuple(float(np.real(np.dot(proj[k], weights))) for k in ("++", "+-", "-+", "--"))


def _diagonal_weights(state):
    state = np.asarray(state)
    if state.ndim == 1:
        return np.abs(state) ** 2
    return np.real(np.diag(state))


def dense_covariance(state, d_a, d_b):
    """Extract the covariance matrix of an explicit Fock-space state.

    ``state`` may be a normalized vector or a density matrix.  Returns a
    :class:`CovarianceMatrix`, which re-validates all invariants.
    """
    state = np.asarray(state)
    w = majorana_operators(d_a, d_b)
    dim2 = len(w)
    s = np.empty((dim2, dim2), dtype=complex)
    if state.ndim == 1:
        phis = [op @ state for op in w]
        for k in range(dim2):
            for j in range(dim2):
                s[k, j] = np.vdot(phis[k], phis[j]) / 2.0
    else:
        dense_w = [op.toarray() for op in w]
        rho_w = [state @ op for op in dense_w]
        for k in range(dim2):
            for j in range(dim2):
                s[k, j] = np.sum(rho_w[k] * dense_w[j].T) / 2.0
    m = -1j * (2 * s - np.eye(dim2))
    return CovarianceMatrix(d_a, d_b, np.real(m))


def _quadratic_hamiltonian(m, d_a, d_b):
    """Dense (i/2) sum_{j<k} M_jk w_j w_k, whose ground state has covariance M."""
    w = [op.toarray() for op in majorana_operators(d_a, d_b)]
    dim = w[0].shape[0]
    h = np.zeros((dim, dim), dtype=complex)
    n = len(w)
    for j in range(n):
        for k in range(j + 1, n):
            if m[j, k] != 0.0:
                h += (0.5j * m[j, k]) * (w[j] @ w[k])
    return h


def dense_from_covariance(cov):
    """Explicit Fock-space state with the given covariance.

    Supports (a) pure covariances (M^2 = -1), realized as the unique
    ground state of the quadratic Hamiltonian built from M, returned as a
    vector, and (b) mode-diagonal mixed covariances, realized as a tensor
    product of single-mode thermal states, returned as a density matrix.
    Generic mixed states are reached by composing case (b) with
    :func:`bogolubov_unitary`; :func:`gaussian_dense_state` does exactly
    that.
    """
    n_modes = cov.d_a + cov.d_b
    if n_modes > 7:
        raise ValueError("dense realization limited to 7 modes")
    m = cov.m
    if cov.is_pure:
        h = _quadratic_hamiltonian(m, cov.d_a, cov.d_b)
        vals, vecs = np.linalg.eigh(h)
        if vals[1] - vals[0] < 1e-8:
            raise ValueError("degenerate ground space; covariance not pure enough")
        return vecs[:, 0]
    idx = mode_doubled_indices(cov.d_a, cov.d_b)
    off_mode = m.copy()
    for x, p in idx:
        off_mode[x, p] = 0.0
        off_mode[p, x] = 0.0
    if np.max(np.abs(off_mode)) > 1e-10:
        raise ValueError(
            "mixed covariance is not mode-diagonal; compose a mode-diagonal "
            "state with bogolubov_unitary (see gaussian_dense_state)"
        )
    rho = np.array([[1.0]])
    for x, p in idx:
        occ = (1.0 + m[x, p]) / 2.0
        rho = np.kron(rho, np.diag([1.0 - occ, occ]))
    return rho


def _skew_log_special_orthogonal(u):
    """Real antisymmetric a with exp(a) = u, via the real Schur form.

    Works for every special orthogonal u, including those with -1
    eigenvalue pairs where a naive matrix logarithm fails to be real.
    """
    t, q = scipy.linalg.schur(u, output="real")
    n = u.shape[0]
    a = np.zeros((n, n))
    minus_ones = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1e-12:
            angle = np.arctan2(t[i + 1, i], t[i, i])
            a[i, i + 1] = -angle
            a[i + 1, i] = angle
            i += 2
        else:
            if t[i, i] < 0:
                minus_ones.append(i)
            i += 1
    # det +1 guarantees an even number of -1 blocks; pair them as
    # rotations by pi
    for i, j in zip(minus_ones[0::2], minus_ones[1::2]):
        a[i, j] = -np.pi
        a[j, i] = np.pi
    a = q @ a @ q.T
    a = (a - a.T) / 2
    if np.max(np.abs(scipy.linalg.expm(a) - u)) > 1e-9:
        raise ValueError("failed to take a real antisymmetric logarithm")
    return a


def bogolubov_unitary(u, d_a, d_b):
    """Dense unitary U with U* w_l U = sum_k u_lk w_k.

    ``u`` must be special orthogonal on the full doubled space (or embed
    local rotations as u_a (+) u_b before calling).  Built as
    exp((1/4) sum a_jk w_j w_k) with a = log(u).
    """
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    if np.max(np.abs(u.T @ u - np.eye(n))) > 1e-8:
        raise ValueError("u must be orthogonal")
    if np.linalg.slogdet(u)[0] < 0:
        raise ValueError("u must have determinant +1")
    a = _skew_log_special_orthogonal(u)
    w = [op.toarray() for op in majorana_operators(d_a, d_b)]
    dim = w[0].shape[0]
    gen = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        for k in range(j + 1, n):
            if a[j, k] != 0.0:
                gen += (0.5 * a[j, k]) * (w[j] @ w[k])
    # gen is antihermitian; exponentiate through the hermitian part
    herm = 1j * gen
    vals, vecs = np.linalg.eigh(herm)
    return (vecs * np.exp(-1j * vals)) @ vecs.conj().T


def gaussian_dense_state(cov):
    """Density matrix of an arbitrary valid covariance (utility for tests).

    Decomposes M = u M_diag u^T with a special orthogonal u (real Schur
    form), builds the mode-diagonal thermal state, and rotates it with
    :func:`bogolubov_unitary`.
    """
    n_modes = cov.d_a + cov.d_b
    if n_modes > 7:
        raise ValueError("dense realization limited to 7 modes")
    t, z = scipy.linalg.schur(cov.m, output="real")
    n = cov.dim
    nus = np.array([t[2 * i, 2 * i + 1] for i in range(n // 2)])
    # reorder Schur pair columns into the module's (x..., p...) layout
    u = np.empty_like(z)
    idx = mode_doubled_indices(cov.d_a, cov.d_b)
    for i in range(n // 2):
        u[:, idx[i, 0]] = z[:, 2 * i]
        u[:, idx[i, 1]] = z[:, 2 * i + 1]
    if np.linalg.slogdet(u)[0] < 0:
        u[:, idx[-1, 1]] *= -1.0
        nus[-1] *= -1.0
    m_diag = np.zeros((n, n))
    for i, nu in enumerate(nus):
        m_diag[idx[i, 0], idx[i, 1]] = nu
        m_diag[idx[i, 1], idx[i, 0]] = -nu
    rho0 = dense_from_covariance(CovarianceMatrix(cov.d_a, cov.d_b, m_diag))
    if rho0.ndim == 1:
        rho0 = np.outer(rho0, rho0.conj())
    big_u = bogolubov_unitary(u, cov.d_a, cov.d_b)
    return big_u @ rho0 @ big_u.conj().T


# ---------------------------------------------------------------------------
# Twirl over the symmetry group of a maximally entangled vector
# ---------------------------------------------------------------------------


def _split_sectors(psi, d_a, d_b):
    """Return (phi_plus, phi_minus) from psi = (phi_+ + phi_-)/sqrt(2)."""
    probs = dense_parity_probabilities(psi, d_a, d_b)
    if abs(probs[0] - 0.5) > 1e-9 or abs(probs[3] - 0.5) > 1e-9:
        raise ValueError(
            "reference vector must weight the two equal-parity sectors "
            f"by 1/2 each, got {probs}"
        )
    proj = parity_projectors(d_a, d_b)
    phi_p = proj["++"] * psi * np.sqrt(2)
    phi_m = proj["--"] * psi * np.sqrt(2)
    return phi_p, phi_m


def _commutant_basis(psi_plus, d_a, d_b):
    phi_p, phi_m = _split_sectors(psi_plus, d_a, d_b)
    psi_minus = (phi_p - phi_m) / np.sqrt(2)
    proj = parity_projectors(d_a, d_b)
    t1 = np.outer(psi_plus, psi_plus.conj())
    t2 = np.outer(psi_minus, psi_minus.conj())
    t3 = np.diag(proj["++"] + proj["--"]).astype(complex)
    t4 = np.diag(proj["+-"] + proj["-+"]).astype(complex)
    return [t1, t2, t3, t4]


def dense_twirl(rho, psi_plus, d_a, d_b):
    """Average of rho over the local symmetry group fixing psi_plus.

    Computed as the projection onto the four-dimensional commutant
    algebra spanned by the two entangled projectors and the two parity
    sector sums; :func:`dense_twirl_sampled` validates this against
    explicit group averaging.
    """
    basis = _commutant_basis(psi_plus, d_a, d_b)
    k = len(basis)
    gram = np.empty((k, k), dtype=complex)
    rhs = np.empty(k, dtype=complex)
    for i in range(k):
        for j in range(k):
            gram[i, j] = np.trace(basis[i].conj().T @ basis[j])
        rhs[i] = np.trace(basis[i].conj().T @ rho)
    coeff = np.linalg.solve(gram, rhs)
    out = sum(c * b for c, b in zip(coeff, basis))
    return (out + out.conj().T) / 2


def _sector_schmidt_frames(psi_plus, d_a, d_b):
    """Schmidt bases of the two equal-parity components of psi_plus.

    Returns per sector the Alice frame (dim_A x D) and Bob frame
    (dim_B x D) such that phi = sum_j a_j (x) b_j / sqrt(D).
    """
    phi_p, phi_m = _split_sectors(psi_plus, d_a, d_b)
    dim_a, dim_b = 2**d_a, 2**d_b
    frames = []
    for phi in (phi_p, phi_m):
        mat = phi.reshape(dim_a, dim_b)
        u, s, vh = np.linalg.svd(mat)
        big_d = int(np.sum(s > 1e-9))
        if np.max(np.abs(s[:big_d] - 1.0 / np.sqrt(big_d))) > 1e-9:
            raise ValueError("sector component is not maximally entangled")
        frames.append((u[:, :big_d], vh.conj().T[:, :big_d]))
    return frames


def _haar_unitary(dim, rng):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def dense_twirl_sampled(rho, psi_plus, d_a, d_b, samples=2000, rng=None):
    """Monte-Carlo group average over the symmetry group of psi_plus.

    Samples parity-preserving local unitaries fixing psi_plus, composed
    with the sector-swapping generator half the time.  Converges to
    :func:`dense_twirl` like 1/sqrt(samples); used only as a validation
    of the commutant projection.
    """
    if rng is None:
        rng = np.random.default_rng()
    (ea_p, eb_p), (ea_m, eb_m) = _sector_schmidt_frames(psi_plus, d_a, d_b)
    big_d = ea_p.shape[1]
    swap_a = ea_m @ ea_p.conj().T + ea_p @ ea_m.conj().T
    swap_b = eb_m @ eb_p.conj().T + eb_p @ eb_m.conj().T
    acc = np.zeros_like(np.asarray(rho, dtype=complex))
    for _ in range(samples):
        up = _haar_unitary(big_d, rng)
        um = _haar_unitary(big_d, rng)
        u_a = ea_p @ up @ ea_p.conj().T + ea_m @ um @ ea_m.conj().T
        u_b = eb_p @ up.conj() @ eb_p.conj().T + eb_m @ um.conj() @ eb_m.conj().T
        if rng.random() < 0.5:
            u_a = u_a @ swap_a
            u_b = u_b @ swap_b
        u = np.kron(u_a, u_b)
        acc += u @ rho @ u.conj().T
    return acc / samples


# ---------------------------------------------------------------------------
# Random instances for verification
# ---------------------------------------------------------------------------


def random_orthogonal(n, rng):
    """Haar-random orthogonal matrix (QR of a Gaussian with sign fix)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_covariance(d_a, d_b, rng, pure=False):
    """Random valid covariance: rotated mode-diagonal occupations.

    ``pure`` pins every occupation to 0 or 1, giving a random pure state.
    """
    n = 2 * (d_a + d_b)
    idx = mode_doubled_indices(d_a, d_b)
    m = np.zeros((n, n))
    for i in range(n // 2):
        if pure:
            nu = float(rng.choice([-1.0, 1.0]))
        else:
            nu = rng.uniform(-0.99, 0.99)
        m[idx[i, 0], idx[i, 1]] = nu
        m[idx[i, 1], idx[i, 0]] = -nu
    u = random_orthogonal(n, rng)
    if np.linalg.slogdet(u)[0] < 0:
        u[:, 0] *= -1.0
    return CovarianceMatrix(d_a, d_b, u @ m @ u.T)


# ---------------------------------------------------------------------------
# Finite-chain reference (single-particle exact diagonalization)
# ---------------------------------------------------------------------------


def _chain_single_particle(n_sites, boundary):
    h = np.zeros((n_sites, n_sites))
    for j in range(n_sites - 1):
        h[j, j + 1] = h[j + 1, j] = 1.0
    if boundary == "ring":
        # boundary hop sign keeps half filling gapped for every even length
        sign = -1.0 if n_sites % 4 == 0 else 1.0
        h[n_sites - 1, 0] += sign
        h[0, n_sites - 1] += sign
    elif boundary != "open":
        raise ValueError(f"unknown boundary {boundary!r}")
    return h


def finite_chain_two_point(n_sites, boundary="ring"):
    """Ground-state <c_m* c_n> of the finite hopping chain.

    The chain Hamiltonian is quadratic, so exact diagonalization happens
    at the single-particle level: fill every negative-energy orbital.
    Ring boundaries converge to the infinite chain as 1/L^2 and are the
    default; open boundaries only as 1/L.
    """
    h = _chain_single_particle(n_sites, boundary)
    vals, vecs = np.linalg.eigh(h)
    if np.min(np.abs(vals)) < 1e-9:
        raise ValueError(f"zero mode at n_sites={n_sites}; half filling ill-defined")
    occ = vecs[:, vals < 0.0]
    return occ @ occ.T


def finite_chain_ground_state(n_sites, boundary="ring"):
    """Fock-space ground state vector of the finite hopping chain (sparse ED)."""
    if n_sites > MAX_MODES:
        raise ValueError(f"Fock-space chain limited to {MAX_MODES} sites")
    single = _chain_single_particle(n_sites, boundary)
    c = dense_operators(n_sites)
    dim = 2**n_sites
    h = scipy.sparse.csr_matrix((dim, dim), dtype=float)
    for j in range(n_sites):
        for k in range(j + 1, n_sites):
            if single[j, k] != 0.0:
                hop = single[j, k] * (c[j].conj().T @ c[k])
                h = h + (hop + hop.conj().T).real
    vals, vecs = scipy.sparse.linalg.eigsh(h, k=1, which="SA")
    del vals
    return vecs[:, 0]
