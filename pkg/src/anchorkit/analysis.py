"""Trace analysis: merging-path distances, Lyapunov evaluation, summability
constants, and measured-versus-theoretical rate reports.

Verdict convention: a measurement passes when
``measured <= bound * (1 + rtol) + atol`` with rtol = 1e-9 and an absolute
floor atol = 1e-14; the floor absorbs floating-point cancellation noise once
residuals decay to machine level without masking real violations. Ratios are
reported against ``bound + atol`` so that the verdict and ``max_ratio`` agree.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import algorithms
from .errors import (
    ConfigError,
    MismatchedTraces,
    MissingReferencePoint,
    SingularSystem,
    StepTooLarge,
)
from .operators import AffineOperator, Array
from .problems import Problem

RTOL = 1e-9
ATOL = 1e-14


@dataclass(frozen=True)
class BoundReport:
    """Paired measured/theoretical sequences with a pass/fail verdict."""

    label: str
    k_values: Array
    measured: Array
    bound: Array
    rtol: float = RTOL
    atol: float = ATOL
    skipped: str = ""

    def __post_init__(self):
        if not (len(self.k_values) == len(self.measured) == len(self.bound)):
            raise MismatchedTraces("report sequences must share length")
        if np.any(self.bound <= 0):
            raise ValueError("bound entries must be strictly positive "
                             "on the reported range")

    @property
    def ratios(self) -> Array:
        return self.measured / (self.bound + self.atol)

    @property
    def max_ratio(self) -> float:
        return float(self.ratios.max())

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0 + self.rtol

    def worst(self):
        """(k, ratio) at the largest measured/bound ratio."""
        i = int(np.argmax(self.ratios))
        return int(self.k_values[i]), float(self.ratios[i])

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "k": [int(k) for k in self.k_values],
            "measured": [float(v) for v in self.measured],
            "bound": [float(v) for v in self.bound],
            "max_ratio": self.max_ratio,
            "rtol": self.rtol,
            "atol": self.atol,
            "skipped": self.skipped,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_rows(self):
        """(k, measured, bound, ratio) rows."""
        for k, m, b, r in zip(self.k_values, self.measured, self.bound,
                              self.ratios):
            yield int(k), float(m), float(b), float(r)


@dataclass(frozen=True)
class LyapunovTrace:
    """Values V_k, decrements V_k - V_{k+1}, and certified lower bounds."""

    label: str
    values: Array
    decrements: Array
    certified_lower: Array
    slack: float = 1e-9

    @property
    def nonnegative_ok(self) -> bool:
        return bool(np.all(self.values >= -self.slack))

    @property
    def decrements_ok(self) -> bool:
        return bool(np.all(self.decrements >= self.certified_lower - self.slack))

    @property
    def passed(self) -> bool:
        return self.nonnegative_ok and self.decrements_ok

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "values": [float(v) for v in self.values],
            "decrements": [float(v) for v in self.decrements],
            "certified_lower": [float(v) for v in self.certified_lower],
            "slack": self.slack,
            "verdict": "pass" if self.passed else "fail",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# merging-path distances


def mp_distance(trace1, trace2) -> Array:
    """Squared distances ||z_k^(1) - z_k^(2)||^2 between two main sequences."""
    a, b = trace1.main, trace2.main
    if a.shape != b.shape:
        raise MismatchedTraces(f"shapes {a.shape} vs {b.shape}")
    if not np.array_equal(a[0], b[0]):
        raise MismatchedTraces("traces start from different points")
    return np.sum((a - b) ** 2, axis=1)


def run_ohm_partner(problem: Problem, alpha: float, iterations: int, z0,
                    tol: float = 1e-12):
    """Anchored proximal partner run used by the merging-path bounds."""
    cfg = algorithms.AlgorithmConfig(algorithm="OHM", alpha=alpha,
                                     max_iterations=iterations,
                                     resolvent_tolerance=tol)
    return algorithms.run(cfg, problem, z0)


def mp_bound_feg_ohm(trace_feg, problem: Problem, z_star=None,
                     trace_ohm=None) -> BoundReport:
    """k^2-weighted squared distance of FEG to its anchored proximal partner
    against the constant ||z0 - z*||^2 / (1 - alpha^2 L^2)."""
    alpha = trace_feg.params["alpha"]
    lip = problem.lipschitz
    if alpha * lip >= 1.0:
        raise ConfigError("bound needs alpha * L < 1")
    if z_star is None:
        z_star = problem.solution
    if z_star is None:
        raise MissingReferencePoint("no solution available for the constant")
    if trace_ohm is None:
        trace_ohm = run_ohm_partner(problem, alpha, trace_feg.iterations,
                                    trace_feg.start)
    sq = mp_distance(trace_feg, trace_ohm)
    k = np.arange(1, len(sq))
    measured = k ** 2 * sq[1:]
    const = float(np.sum((trace_feg.start - z_star) ** 2)
                  / (1.0 - alpha ** 2 * lip ** 2))
    return BoundReport(label="feg-ohm-merging-path", k_values=k,
                       measured=measured, bound=np.full(k.shape, const),
                       skipped="k=0 (identical starts)")


def feg_summability_report(trace_feg, problem: Problem, z_star=None) -> BoundReport:
    """Partial sums of ||k B z_k - (k+1) B z_{k+1/2}||^2 against
    ||z0 - z*||^2 / (alpha^2 (1 - alpha^2 L^2))."""
    alpha = trace_feg.params["alpha"]
    lip = problem.lipschitz
    if alpha * lip >= 1.0:
        raise ConfigError("bound needs alpha * L < 1")
    if z_star is None:
        z_star = problem.solution
    if z_star is None:
        raise MissingReferencePoint("no solution available for the constant")
    op_main = trace_feg.op_evals
    op_half = trace_feg.auxiliary["op_half"]
    n = len(op_half)
    k = np.arange(n)
    summand = np.sum((k[:, None] * op_main[:n] - (k[:, None] + 1) * op_half) ** 2,
                     axis=1)
    partial = np.cumsum(summand)
    const = float(np.sum((trace_feg.start - z_star) ** 2)
                  / (alpha ** 2 * (1.0 - alpha ** 2 * lip ** 2)))
    return BoundReport(label="feg-summability", k_values=k,
                       measured=partial, bound=np.full(n, const))


def mp_bound_apg(trace_apg, trace_drs, problem: Problem,
                 xi_star=None) -> BoundReport:
    """max(||xi_k - u_k||^2, ||z_k - w_k||^2) against C(xi_0)^2 / (L^2 (k+1)^2)."""
    if trace_apg.params["alpha"] != trace_drs.params["alpha"]:
        raise MismatchedTraces("traces use different step sizes")
    sq_outer = mp_distance(trace_apg, trace_drs)
    z, w = trace_apg.auxiliary["z"], trace_drs.auxiliary["w"]
    n = min(len(z), len(w), len(sq_outer))
    sq_inner = np.sum((z[:n] - w[:n]) ** 2, axis=1)
    measured = np.maximum(sq_outer[:n], sq_inner)
    if xi_star is None:
        xi_star = fixed_point_reference(problem, trace_apg.params["alpha"],
                                        start=trace_apg.start)
    c = apg_path_constant(problem, trace_apg.start, xi_star)
    k = np.arange(n)
    lip = problem.lipschitz
    if lip > 0:
        bound = c ** 2 / (lip ** 2 * (k + 1.0) ** 2)
    else:
        bound = np.ones(n)  # degenerate smooth part; paths coincide exactly
    return BoundReport(label="apg-drs-merging-path", k_values=k,
                       measured=measured, bound=bound)


def apg_path_constant(problem: Problem, xi0, xi_star) -> float:
    """C(xi_0) = L (||xi_0 - xi*|| + 1) + ||B xi*||."""
    lip = problem.lipschitz
    return float(lip * (np.linalg.norm(xi0 - xi_star) + 1.0)
                 + np.linalg.norm(problem.operator(xi_star)))


# ---------------------------------------------------------------------------
# Lyapunov evaluation


def lyapunov_feg(trace, alpha: float, z_star, lipschitz: float) -> LyapunovTrace:
    """V_k = (alpha k^2 / 2) ||B z_k||^2 + k <B z_k, z_k - z0> +
    ||z0 - z*||^2 / (2 alpha), with certified decrement
    (alpha (1 - alpha^2 L^2) / 2) ||k B z_k - (k+1) B z_{k+1/2}||^2."""
    z = trace.main
    bz = trace.op_evals
    bh = trace.auxiliary["op_half"]
    n = len(bh)  # decrements defined for k = 0 .. n-1
    k = np.arange(n + 1, dtype=float)
    z0 = z[0]
    head = float(np.sum((z0 - z_star) ** 2)) / (2.0 * alpha)
    values = (0.5 * alpha * k ** 2 * np.sum(bz[:n + 1] ** 2, axis=1)
              + k * np.sum(bz[:n + 1] * (z[:n + 1] - z0), axis=1)
              + head)
    kk = np.arange(n, dtype=float)
    summand = np.sum((kk[:, None] * bz[:n] - (kk[:, None] + 1.0) * bh) ** 2,
                     axis=1)
    cert = 0.5 * alpha * (1.0 - alpha ** 2 * lipschitz ** 2) * summand
    return LyapunovTrace(label="feg-lyapunov", values=values,
                         decrements=values[:-1] - values[1:],
                         certified_lower=cert)


def lyapunov_sm_eag(trace, alpha: float, mu: float, lipschitz: float,
                    z_star) -> LyapunovTrace:
    """Lyapunov values for the strongly monotone anchored method.

    q_k and p_k follow the inverse-geometric anchor schedule; p_0 = q_0 = 0.
    The certified decrement is (alpha (1 + 2 alpha mu - alpha^2 L^2) / 2)
    ||B z_0||^2 at k = 0 and q_k / (beta_k (1 - beta_k)) times the analogous
    half-step mismatch for k >= 1.
    """
    if mu <= 0:
        raise ConfigError("the strongly monotone Lyapunov needs mu > 0")
    z = trace.main
    bz = trace.op_evals
    bh = trace.auxiliary["op_half"]
    n = len(bh)
    x = 1.0 + 2.0 * alpha * mu
    z0 = z[0]
    head = (1.0 / (2.0 * alpha) + mu) * float(np.sum((z0 - z_star) ** 2))
    # geometric sums S_k = sum_{j<=k} x^j, anchors beta_k = 1/S_k
    s = np.empty(n + 1)
    s[0] = 1.0
    for j in range(1, n + 1):
        s[j] = 1.0 + x * s[j - 1]
    beta = 1.0 / s
    eta = (1.0 - beta) / x
    kk = np.arange(n + 1, dtype=float)
    q = np.zeros(n + 1)
    q[1:] = (x - x ** (1.0 - kk[1:])) / (2.0 * alpha * mu)
    p = np.zeros(n + 1)
    p[1:] = 0.5 * alpha * q[1:] * s[:-1]
    diff = z[:n + 1] - z0
    values = (p * np.sum(bz[:n + 1] ** 2, axis=1)
              + q * np.sum((bz[:n + 1] - mu * diff) * diff, axis=1)
              + head)
    lead = 0.5 * alpha * (1.0 + 2.0 * alpha * mu - alpha ** 2 * lipschitz ** 2)
    mismatch = np.sum((eta[:n, None] * bz[:n] - bh) ** 2, axis=1)
    cert = np.empty(n)
    cert[0] = lead * float(np.sum(bz[0] ** 2))
    if n > 1:
        scale = q[1:n] / (beta[1:n] * (1.0 - beta[1:n]))
        cert[1:] = lead * scale * mismatch[1:]
    return LyapunovTrace(label="sm-eag-lyapunov", values=values,
                         decrements=values[:-1] - values[1:],
                         certified_lower=cert)


# ---------------------------------------------------------------------------
# rate bounds

RATE_RULES = ("OHM_RATE", "OC_HALPERN_RATE", "SM_EAG_RATE", "FEG_RATE",
              "APG_RESIDUAL", "OHM_DRS_RATE")


def rate_bound(trace, problem: Problem, rule: str, reference=None) -> BoundReport:
    """Compare a trace's natural residuals against a theoretical rate.

    ``reference`` overrides the reference point (w*, z*, or xi*); by default
    the problem's known solution is used, or a long anchored reference run
    for the splitting rules.
    """
    if rule not in RATE_RULES:
        raise ConfigError(f"unknown rate rule {rule!r}")
    alpha = trace.params.get("alpha")
    res = trace.residual_norms
    start = trace.start

    if rule in ("OHM_RATE", "OC_HALPERN_RATE", "SM_EAG_RATE", "FEG_RATE"):
        ref = reference if reference is not None else problem.solution
        if ref is None:
            raise MissingReferencePoint(f"{rule} needs a solution point")
        dist0 = float(np.sum((start - ref) ** 2))
        if rule == "OHM_RATE":
            k = np.arange(len(res))
            bound = 4.0 * dist0 / (k + 1.0) ** 2
            measured = res ** 2
            skipped = ""
        elif rule == "OC_HALPERN_RATE":
            gamma = trace.params.get("gamma")
            if gamma is None or gamma <= 1.0:
                raise ConfigError("OC_HALPERN_RATE needs gamma > 1")
            k = np.arange(len(res))
            gsum = (gamma ** (k + 1.0) - 1.0) / (gamma - 1.0)
            bound = (1.0 + 1.0 / gamma) ** 2 * dist0 / gsum ** 2
            measured = res ** 2
            skipped = ""
        elif rule == "SM_EAG_RATE":
            mu = problem.mu
            x = 1.0 + 2.0 * alpha * mu
            k = np.arange(1, len(res))
            root = math.sqrt(x)
            if root > 1.0:
                gsum = (root ** k - 1.0) / (root - 1.0)  # sum_{j<k} x^(j/2)
            else:
                gsum = k.astype(float)  # mu = 0 limit
            bound = (root + 1.0) ** 2 * dist0 / (alpha ** 2 * gsum ** 2)
            measured = res[1:] ** 2
            skipped = "k=0 (empty anchor sum)"
        else:  # FEG_RATE
            lip = problem.lipschitz
            k = np.arange(1, len(res))
            bound = 4.0 * lip ** 2 * dist0 / k.astype(float) ** 2
            measured = res[1:] ** 2
            skipped = "k=0 (bound vacuous)"
        return BoundReport(label=rule.lower().replace("_", "-"), k_values=k,
                           measured=measured, bound=bound, skipped=skipped)

    # splitting rules need the fixed point of the splitting map
    ref = reference if reference is not None else fixed_point_reference(
        problem, alpha, start=start)
    k = np.arange(len(res))
    if rule == "OHM_DRS_RATE":
        dist0 = float(np.sum((start - ref) ** 2))
        bound = 4.0 * dist0 / (k + 1.0) ** 2
        measured = res ** 2  # residuals already carry the alpha factor
    else:  # APG_RESIDUAL
        lip = problem.lipschitz
        c = apg_path_constant(problem, start, ref)
        bound = ((3.0 + alpha * lip) ** 2 * c ** 2
                 / (alpha ** 2 * lip ** 2 * (k + 1.0) ** 2))
        measured = res ** 2
    return BoundReport(label=rule.lower().replace("_", "-"), k_values=k,
                       measured=measured, bound=bound)


# ---------------------------------------------------------------------------
# reference points


def fixed_point_reference(problem: Problem, alpha: float,
                          iterations: int = 100_000,
                          tol: float = 1e-12, start=None) -> Array:
    """Long anchored reference run approximating the projection of the start
    onto the fixed-point set (splitting map for composite problems, resolvent
    otherwise)."""
    z0 = start if start is not None else problem.start
    if z0 is None:
        z0 = problem.solution
    if z0 is None:
        raise MissingReferencePoint("no start point available")
    name = "OHM_DRS" if problem.is_composite else "OHM"
    cfg = algorithms.AlgorithmConfig(algorithm=name, alpha=alpha,
                                     max_iterations=iterations,
                                     resolvent_tolerance=tol,
                                     record_iterates=False)
    return algorithms.run(cfg, problem, z0).final


def affine_zero_projection(problem: Problem, z0) -> Array:
    """Orthogonal projection of z0 onto the zero set of an affine operator,
    via least squares plus a nullspace correction."""
    op = problem.operator
    if not isinstance(op, AffineOperator):
        raise MissingReferencePoint("projection needs an affine operator")
    m, t = op.matrix, op.offset
    particular, *_ = np.linalg.lstsq(m, -t, rcond=None)
    if np.linalg.norm(m @ particular + t) > 1e-8 * max(1.0, np.linalg.norm(t)):
        raise SingularSystem("operator has no zeros")
    _, sing, vt = np.linalg.svd(m)
    cutoff = sing.max() * max(m.shape) * np.finfo(float).eps if sing.size else 0.0
    rank = int(np.sum(sing > cutoff))
    null_basis = vt[rank:].T
    z0 = np.asarray(z0, dtype=float)
    return particular + null_basis @ (null_basis.T @ (z0 - particular))


# ---------------------------------------------------------------------------
# summability constants

_SUMMABILITY_RULES = ("EAG", "APS")


def _shared_numerator(r):
    return 2.0 - r - 2.0 * r ** 2 - 2.0 * r ** 3 + 7.0 * r ** 4 - 2.0 * r ** 6


def _eag_positivity_factors(r):
    """(name, coefficients highest-degree-first in k) for every factor whose
    positivity the certified range requires."""
    return [
        ("p0-numerator", [1.0 - 3.0 * r + 6.0 * r ** 2 - 2.0 * r ** 4]),
        ("tau", [1.0 - r + r ** 2 + r ** 3, -r * (2.0 - r - r ** 2)]),
        ("s11", [(1.0 - r ** 2) ** 2,
                 1.0 - 2.0 * r - 3.0 * r ** 2 + 2.0 * r ** 4,
                 -r * (2.0 + r - r ** 3)]),
        ("t22-numerator", [(1.0 + r) ** 2 * (1.0 - r) ** 3,
                           1.0 - 5.0 * r + 4.0 * r ** 3 + 3.0 * r ** 4 - 3.0 * r ** 5,
                           -r * (4.0 - 6.0 * r - 2.0 * r ** 2 - 3.0 * r ** 3 + 3.0 * r ** 4),
                           r ** 2 * (4.0 + r ** 2 - r ** 3)]),
        ("t22-denominator", [(1.0 - r ** 2) ** 2, -r * (2.0 + r - r ** 3)]),
        ("t33-numerator", [1.0 - 4.0 * r - 2.0 * r ** 2 + r ** 4,
                           -r * (6.0 - r - r ** 3)]),
        ("t33-denominator", [(1.0 + r) ** 2 * (1.0 - r),
                             -r * (2.0 + r + r ** 2)]),
    ]


def _aps_positivity_factors(r):
    return [
        ("p0-numerator", [1.0 - 3.0 * r + 6.0 * r ** 2 - 2.0 * r ** 4]),
        ("epsilon", [1.0 - r - r ** 2 - r ** 3]),
        ("tau1", [1.0 + 2.0 * r ** 2, -r * (1.0 - 2.0 * r)]),
        ("s11", [1.0 + r - 4.0 * r ** 2 - 4.0 * r ** 3,
                 -r * (1.0 + 2.0 * r + 4.0 * r ** 2)]),
        ("tau-gap", [1.0 - 5.0 * r + 2.0 * r ** 2 + 2.0 * r ** 3 + 6.0 * r ** 4,
                     1.0 - 12.0 * r - 3.0 * r ** 2 + 4.0 * r ** 3 + 12.0 * r ** 4,
                     -r * (7.0 + 5.0 * r - 8.0 * r ** 2 - 6.0 * r ** 3)]),
        ("half-range", [1.0 - 2.0 * r]),
        ("t22-factor-a", [1.0 + 3.0 * r + 2.0 * r ** 2, -r * (1.0 - 2.0 * r)]),
        ("t22-factor-b", [1.0 - 4.0 * r ** 2, -r * (1.0 + 4.0 * r)]),
        ("t33-numerator", [1.0 - 8.0 * r - 4.0 * r ** 2 - 4.0 * r ** 3,
                           -2.0 * r * (5.0 - 2.0 * r + 2.0 * r ** 2)]),
    ]


_POSITIVITY_GRID = np.concatenate([np.arange(1, 1001), [1e4, 1e6]])


def summability_positivity(rule: str, r: float):
    """Names of factors that fail positivity at this step ratio (empty = ok).

    Factors are polynomials in the iteration counter; they are evaluated on
    k in 1..1000 plus large probes, and leading coefficients must be positive
    so the sign persists beyond the grid.
    """
    factors = {"EAG": _eag_positivity_factors,
               "APS": _aps_positivity_factors}[rule](r)
    bad = []
    for name, coeffs in factors:
        if coeffs[0] <= 0:
            bad.append(name)
            continue
        vals = np.polyval(coeffs, _POSITIVITY_GRID)
        if np.any(vals <= 0):
            bad.append(name)
    return bad


def summability_constant(rule: str, alpha: float, lipschitz: float,
                         certify: bool = True) -> float:
    """Closed-form constant C for the anchored-gap series bound
    sum (k+1)^2 ||summand||^2 <= (C / alpha^2) ||z0 - z*||^2.

    With ``certify`` the step ratio must lie in the range where every factor
    in the derivation is positive; otherwise StepTooLarge is raised. Pass
    ``certify=False`` to evaluate the rational function outside that range.
    """
    if rule not in _SUMMABILITY_RULES:
        raise ConfigError(f"unknown summability rule {rule!r}")
    r = alpha * lipschitz
    if not 0.0 < r < 1.0:
        raise StepTooLarge(f"need 0 < alpha * L < 1, got {r:.6g}")
    if certify:
        bad = summability_positivity(rule, r)
        if bad:
            raise StepTooLarge(
                f"{rule} constant not certified at alpha*L = {r:.6g}: "
                f"nonpositive factors {bad}")
    num = _shared_numerator(r)
    if rule == "EAG":
        den = r * (1.0 - r) ** 3 * (1.0 + r) ** 2 * (2.0 + r)
    else:
        den = (r * (1.0 - r) ** 2 * (2.0 + r)
               * (1.0 - r - r ** 2 - r ** 3))
    return num / den


def iterations_to_tolerance(trace, eps: float):
    """First index with residual <= eps, or None when never reached."""
    hits = np.flatnonzero(trace.residual_norms <= eps)
    return int(hits[0]) if hits.size else None
