"""Distillation pipeline: twirl reduction, distillability tests, hashing rate.

A bipartite state on ``d + d`` modes splits into four local parity
sectors, each of dimension ``D = 2**(d-1)``.  Averaging over the local
symmetry group of a maximally entangled reference vector compresses any
state to four numbers; a joint parity measurement then either yields an
isotropic D x D-level pair (equal outcomes, probability p) or a useless
chaotic state.  For the qubit endpoint (d = 2, D = 2) the asymptotic
one-way hashing rate applies.

The twirl is never performed as a group integral here: the invariant
state is fully determined by the two reference fidelities and the parity
sector probabilities, all of which the twirl preserves.  The dense
reference module validates this shortcut by explicit averaging.
"""

import math
from dataclasses import dataclass

from .covariance import (
    conjugate_projection,
    equal_parity_probability,
    fidelity,
    normal_form,
    restrict_modes,
    standard_projection,
)

__all__ = [
    "InvariantStateParams",
    "DistillationReport",
    "twirl_project",
    "reconstructed_probabilities",
    "conditional_fidelity",
    "distillable",
    "isotropic_theta",
    "hashing_rate",
    "run_protocol",
    "CSV_FIELDS",
    "csv_header",
    "report_csv_row",
]

#: Coefficients may undershoot zero by at most this much (Pfaffian round-off).
COEFF_TOL = 1e-9


@dataclass(frozen=True)
class InvariantStateParams:
    """Coefficients of a twirl-invariant state.

    The state is ``l+ |psi+><psi+| + l- |psi-><psi-| + m+ (P++ + P--)
    + m- (P+- + P-+)`` with sector dimension ``D = 2**(d-1)``.
    """

    lambda_plus: float
    lambda_minus: float
    mu_plus: float
    mu_minus: float
    sector_dim: int

    def __post_init__(self):
        d2 = self.sector_dim**2
        trace = self.lambda_plus + self.lambda_minus + 2 * d2 * (self.mu_plus + self.mu_minus)
        if abs(trace - 1.0) > 1e-9:
            raise ValueError(f"invariant-state coefficients have trace {trace}, not 1")
        # positivity: the eigenvalues are l+- + m+ (reference vectors),
        # m+ (rest of the equal sectors) and m- (cross sectors); l- itself
        # may be negative when the psi- weight sits below the chaotic floor.
        eigs = {
            "lambda_plus + mu_plus": self.lambda_plus + self.mu_plus,
            "lambda_minus + mu_plus": self.lambda_minus + self.mu_plus,
            "mu_plus": self.mu_plus,
            "mu_minus": self.mu_minus,
        }
        for name, value in eigs.items():
            if value < -1e-12:
                raise ValueError(f"invariant state not positive: {name} = {value}")
        for p in reconstructed_probabilities(self):
            if not -1e-12 <= p <= 1 + 1e-12:
                raise ValueError(f"reconstructed sector probability {p} outside [0, 1]")


def reconstructed_probabilities(params):
    """Sector probabilities (p++, p+-, p-+, p--) of the invariant state."""
    d2 = params.sector_dim**2
    p_eq = (params.lambda_plus + params.lambda_minus) / 2 + params.mu_plus * d2
    p_cross = params.mu_minus * d2
    return (p_eq, p_cross, p_cross, p_eq)


def twirl_project(f_plus, f_minus, p_equal_pp, p_equal_mm, p_cross, sector_dim):
    """Invariant-state coefficients of the twirled state.

    All six inputs are properties of the pre-twirl state that the twirl
    preserves: the overlaps with the two reference vectors and the parity
    sector probabilities (the two equal sectors and the two cross
    sectors are each averaged by the twirl, so only their means enter).

    Raises
    ------
    ValueError
        For ``sector_dim == 1`` (the reduction degenerates: there is no
        chaotic component to separate) or inconsistent inputs producing
        an invariant state that is not positive beyond ``-COEFF_TOL``.
    """
    if sector_dim < 2:
        raise ValueError("twirl reduction requires sector dimension >= 2")
    d2 = sector_dim**2
    p_eq = (p_equal_pp + p_equal_mm) / 2.0
    mu_minus = p_cross / d2
    mu_plus = (p_eq - (f_plus + f_minus) / 2.0) / (d2 - 1)
    lambda_plus = f_plus - mu_plus
    lambda_minus = f_minus - mu_plus
    eigs = {
        "f_plus": lambda_plus + mu_plus,
        "f_minus": lambda_minus + mu_plus,
        "mu_plus": mu_plus,
        "mu_minus": mu_minus,
    }
    for name, value in eigs.items():
        if value < -COEFF_TOL:
            raise ValueError(f"inconsistent twirl inputs: {name} = {value:.3e} < 0")
    mu_plus = max(0.0, mu_plus)
    mu_minus = max(0.0, mu_minus)
    # re-balance the trace exactly after clipping tiny negatives
    lambda_plus = f_plus - mu_plus
    lambda_minus = 1.0 - lambda_plus - 2 * d2 * (mu_plus + mu_minus)
    if abs(lambda_minus - (f_minus - mu_plus)) > COEFF_TOL:
        raise ValueError("inconsistent twirl inputs: sector probabilities and "
                         "fidelities do not define a normalized state")
    return InvariantStateParams(
        lambda_plus=lambda_plus,
        lambda_minus=lambda_minus,
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        sector_dim=sector_dim,
    )


def conditional_fidelity(params):
    """Post-measurement isotropic fidelity and success probability.

    Measuring both local parities on the invariant state succeeds (equal
    outcomes) with probability ``p``; the conditional state is then an
    isotropic D x D pair whose fidelity with the reference is ``f``.
    Cross outcomes leave the chaotic state, which carries no rate.
    """
    p = params.lambda_plus + params.lambda_minus + 2 * params.mu_plus * params.sector_dim**2
    if p <= 1e-15:
        raise ValueError("equal-parity probability vanishes; nothing to condition on")
    f = (params.lambda_plus + params.lambda_minus + 2 * params.mu_plus) / p
    return f, p


def distillable(f_plus, f_minus, p, sector_dim):
    """Strict distillability criterion for the conditioned isotropic state.

    True iff ``f_plus + f_minus > p / D``; the boundary counts as not
    distillable.  Callers without access to ``p`` may pass the
    conservative choice ``p = 1``.
    """
    return bool(f_plus + f_minus > p / sector_dim)


def isotropic_theta(f, sector_dim):
    """Mixing parameter of the isotropic state with fidelity ``f``.

    Ranges over [-1/(D^2 - 1), 1]; zero marks the chaotic state.
    """
    if sector_dim < 2:
        raise ValueError("isotropic parameterization requires sector dimension >= 2")
    d2 = sector_dim**2
    return (d2 * f - 1.0) / (d2 - 1.0)


def _xlog2x(x):
    return x * math.log2(x) if x > 0.0 else 0.0


def hashing_rate(p, f):
    """Asymptotic one-way hashing rate for qubit isotropic pairs.

    ``R = p (1 - S)`` with S the entropy of the isotropic two-qubit
    state of fidelity ``f``; clamped below at zero.
    """
    raw = p * (1.0 + _xlog2x(f) + _xlog2x(1.0 - f) - (1.0 - f) * math.log2(3.0))
    return max(0.0, raw)


@dataclass(frozen=True)
class DistillationReport:
    """Per-run record of the truncate-twirl-measure pipeline."""

    d: int
    n_keep: int
    singular_values: tuple
    f_plus: float
    f_minus: float
    p: float
    f: float
    distillable: bool
    rate: float | None = None
    rate_per_site: float | None = None


def run_protocol(cov, n_keep, conservative_p=False):
    """Truncate to the most entangled modes, twirl, and rate the result.

    Pipeline: bring the state to normal form, keep the ``n_keep`` modes
    per side carrying the largest singular-value pairs of Y, evaluate the
    overlaps with the standard reference pair and the equal-parity
    probability, test distillability, and reduce to the conditional
    isotropic state.  The hashing rate is attached only at the qubit
    endpoint ``n_keep = 2``; for other sizes the rate is unavailable.

    With ``conservative_p`` the measured probability is replaced by 1
    throughout (useful when p is unknown; never increases the rate).
    """
    if n_keep < 1 or n_keep > min(cov.d_a, cov.d_b):
        raise ValueError(f"n_keep = {n_keep} out of range for ({cov.d_a}, {cov.d_b}) modes")
    rotated, _, _ = normal_form(cov)
    kept = range(n_keep)
    truncated = restrict_modes(rotated, kept, kept)
    y_diag = tuple(
        sorted((float(abs(truncated.y_block[j, j])) for j in range(2 * n_keep)), reverse=True)
    )
    proj = standard_projection(n_keep)
    f_plus = fidelity(truncated, proj)
    f_minus = fidelity(truncated, conjugate_projection(n_keep))
    p = 1.0 if conservative_p else equal_parity_probability(truncated)
    sector_dim = 2 ** (n_keep - 1)
    is_distillable = distillable(f_plus, f_minus, p, sector_dim)
    if p <= 1e-15:
        raise ValueError("equal-parity probability vanishes after truncation")
    f = (f_plus + f_minus) / p
    rate = None
    if n_keep == 2:
        params = twirl_project(f_plus, f_minus, p / 2, p / 2, (1.0 - p) / 2, sector_dim)
        f_cond, p_cond = conditional_fidelity(params)
        rate = hashing_rate(p_cond, f_cond)
    return DistillationReport(
        d=cov.d_a,
        n_keep=n_keep,
        singular_values=y_diag,
        f_plus=f_plus,
        f_minus=f_minus,
        p=p,
        f=f,
        distillable=is_distillable,
        rate=rate,
    )


# ---------------------------------------------------------------------------
# CSV serialization of reports
# ---------------------------------------------------------------------------

CSV_FIELDS = ("d", "n_keep", "f_plus", "f_minus", "p", "f", "distillable", "rate", "rate_per_site")


def csv_header():
    return ",".join(CSV_FIELDS)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def report_csv_row(report):
    """One CSV row per report; floats carry 12 significant digits."""
    values = (
        report.d,
        report.n_keep,
        report.f_plus,
        report.f_minus,
        report.p,
        report.f,
        report.distillable,
        report.rate,
        report.rate_per_site,
    )
    return ",".join(_fmt(v) for v in values)
