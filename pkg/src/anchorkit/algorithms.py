"""Iterative algorithms behind a single trace-producing run interface.

Anchor schedules differ structurally across algorithms (1/(k+1) vs 1/(k+2)
vs inverse geometric sums), so each algorithm gets its own stepper; only the
damped anchored extragradient core is shared between FEG and SM_EAG_PLUS,
which must produce bit-identical iterates when mu = 0.

Oracle accounting: ``b_per_iter``/``resolvent_per_iter`` count the calls the
recursion itself makes (one entry per update step); residual instrumentation
is never billed there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, StepSizeCollapse
from .operators import (
    Array,
    GradientOperator,
    Operator,
    as_vector,
    solve_strongly_monotone,
)
from .problems import Problem

ALGORITHMS = (
    "GDA", "EG", "OG", "AGM",
    "EAG", "EAG_V", "FEG", "APS", "APS_V",
    "OHM", "OC_HALPERN", "SM_EAG_PLUS",
    "OHM_DRS", "APG_STAR",
)

@dataclass(frozen=True)
class AlgorithmConfig:
    """Algorithm identifier plus every scalar/schedule parameter."""

    algorithm: str
    alpha: float
    max_iterations: int = 10_000
    momentum_a: float = 3.0          # AGM only, must exceed 2
    gamma: float | None = None       # OC_HALPERN contraction parameter (> 1)
    theta: float | None = None       # APS_V only
    epsilon_schedule: str = "default"  # APG_STAR inner tolerance rule
    resolvent_tolerance: float = 1e-12
    stop_residual: float | None = None
    record_iterates: bool = True


@dataclass(frozen=True)
class IterateTrace:
    """Full record of a run.

    ``main`` holds the primary iterates (length iterations+1, index 0 = start,
    shorter only after an early residual stop). Auxiliary sequences may be
    offset by one as documented per algorithm. ``residual_norms[k]`` is the
    algorithm's natural residual at index k.
    """

    algorithm: str
    main: Array
    residual_norms: Array
    auxiliary: dict = field(default_factory=dict)
    op_evals: Array | None = None
    b_per_iter: Array | None = None
    resolvent_per_iter: Array | None = None
    warmup_b: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for arr in (self.main, self.residual_norms, self.op_evals,
                    self.b_per_iter, self.resolvent_per_iter):
            if arr is not None:
                arr.setflags(write=False)
        for arr in self.auxiliary.values():
            arr.setflags(write=False)

    @property
    def iterations(self) -> int:
        return len(self.main) - 1

    @property
    def start(self) -> Array:
        return self.main[0]

    @property
    def final(self) -> Array:
        return self.main[-1]

    def total_b_evals(self) -> int:
        n = self.warmup_b
        if self.b_per_iter is not None:
            n += int(self.b_per_iter.sum())
        return n

    def total_resolvent_evals(self) -> int:
        if self.resolvent_per_iter is None:
            return 0
        return int(self.resolvent_per_iter.sum())

    def cumulative_counts(self):
        """(b, resolvent) oracle totals aligned with the rows of ``main``."""
        if not self.params.get("record_iterates", True):
            raise ValueError("trace was recorded in residuals-only mode")
        rows = len(self.main)
        b = np.zeros(rows, dtype=int)
        r = np.zeros(rows, dtype=int)
        per_row = self.params.get("counts_per_row", False)
        if self.b_per_iter is not None:
            c = np.cumsum(self.b_per_iter)
            if per_row:
                b[:] = c[:rows]
            else:
                b[1:] = c[:rows - 1]
        if self.resolvent_per_iter is not None:
            c = np.cumsum(self.resolvent_per_iter)
            if per_row:
                r[:] = c[:rows]
            else:
                r[1:] = c[:rows - 1]
        return b + self.warmup_b, r


class _Counted:
    """Forward/resolvent wrapper that counts algorithmic oracle calls."""

    __slots__ = ("op", "b", "res")

    def __init__(self, op: Operator):
        self.op = op
        self.b = 0
        self.res = 0

    def __call__(self, z):
        self.b += 1
        return self.op(z)

    def resolvent(self, alpha, z, tol):
        self.res += 1
        return self.op.resolvent(alpha, z, tol)


def max_step_strongly_monotone(lipschitz: float, mu: float) -> float:
    """Largest admissible SM_EAG_PLUS step, (sqrt(L^2 + mu^2) + mu) / L^2."""
    if lipschitz <= 0:
        return math.inf
    return (math.hypot(lipschitz, mu) + mu) / lipschitz ** 2


def validate_config(config: AlgorithmConfig, problem: Problem) -> None:
    """Reject configurations outside the admissible range for the problem."""
    name = config.algorithm
    if name not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {name!r}")
    if not (config.alpha > 0 and math.isfinite(config.alpha)):
        raise ConfigError("alpha must be a positive finite real")
    if config.max_iterations < 1:
        raise ConfigError("max_iterations must be at least 1")
    lip, mu = problem.lipschitz, problem.mu
    if problem.is_composite and name not in ("OHM_DRS", "APG_STAR"):
        raise ConfigError(f"{name} does not handle composite problems")
    if name in ("OHM_DRS", "APG_STAR") and not problem.is_composite:
        raise ConfigError(f"{name} needs a composite problem")
    if name in ("FEG", "EAG_V") and config.alpha * lip >= 1.0:
        raise ConfigError(f"{name} needs alpha * L < 1, "
                          f"got {config.alpha * lip:.6g}")
    if name == "SM_EAG_PLUS":
        top = max_step_strongly_monotone(lip, mu)
        if config.alpha > top * (1.0 + 1e-12):
            raise ConfigError(
                f"SM_EAG_PLUS needs alpha <= (sqrt(L^2+mu^2)+mu)/L^2 = {top:.6g}")
    if name == "APG_STAR":
        if config.alpha * lip >= 1.0:
            raise ConfigError("APG_STAR needs alpha * L < 1")
        if config.epsilon_schedule != "default":
            raise ConfigError(
                f"unknown inner tolerance rule {config.epsilon_schedule!r}")
    if name == "APS_V":
        if config.theta is None or config.theta <= 0:
            raise ConfigError("APS_V needs theta > 0 (no endorsed default)")
        m = 2.0 * lip ** 2 * (1.0 + config.theta)
        if 1.0 - m * config.alpha ** 2 <= 0:
            raise ConfigError("APS_V needs 1 - 2 L^2 (1+theta) alpha^2 > 0 "
                              "at the initial step")
    if name == "AGM":
        if not isinstance(problem.operator, GradientOperator):
            raise ConfigError("AGM needs a gradient-field problem")
        if config.momentum_a <= 2:
            raise ConfigError("AGM momentum parameter must exceed 2")
    if name == "OC_HALPERN":
        gamma = config.gamma
        if gamma is None and mu > 0:
            gamma = math.sqrt(1.0 + 2.0 * config.alpha * mu)
        if gamma is None or gamma <= 1.0:
            raise ConfigError("OC_HALPERN needs gamma > 1 (or a strongly "
                              "monotone problem to derive it from)")


def run(config: AlgorithmConfig, problem: Problem, z0) -> IterateTrace:
    """Validate, dispatch to the per-algorithm stepper, and assemble the trace.

    Deterministic: identical inputs produce bit-identical traces.
    """
    validate_config(config, problem)
    z0 = as_vector(z0, problem.dim)
    stepper = _STEPPERS[config.algorithm]
    return stepper(config, problem, z0)


# ---------------------------------------------------------------------------
# forward one-call/two-call classical methods


def _finish_forward(name, config, zs, ops, residuals, b_steps, warmup, extra=None):
    record = config.record_iterates
    main = np.array(zs if record else [zs[0], zs[-1]])
    params = {"alpha": config.alpha, "max_iterations": config.max_iterations,
              "stop_residual": config.stop_residual,
              "record_iterates": record}
    return IterateTrace(
        algorithm=name,
        main=main,
        residual_norms=np.array(residuals),
        auxiliary={k: np.array(v) for k, v in (extra or {}).items()} if record else {},
        op_evals=np.array(ops) if record else None,
        b_per_iter=np.array(b_steps, dtype=int),
        resolvent_per_iter=np.zeros(len(b_steps), dtype=int),
        warmup_b=warmup,
        params=params,
    )


def _run_gda(config, problem, z0):
    b = _Counted(problem.operator)
    alpha, stop = config.alpha, config.stop_residual
    z = z0
    zs, ops, res, steps = [z0], [], [], []
    for _ in range(config.max_iterations):
        bz = b(z)
        ops.append(bz)
        res.append(np.linalg.norm(bz))
        steps.append(1)
        if stop is not None and res[-1] <= stop:
            steps.pop()
            break
        z = z - alpha * bz
        zs.append(z)
    else:
        ops.append(problem.operator(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("GDA", config, zs, ops, res, steps, 0)


def _run_eg(config, problem, z0):
    b = _Counted(problem.operator)
    alpha, stop = config.alpha, config.stop_residual
    z = z0
    zs, ops, res, steps, halves = [z0], [], [], [], []
    for _ in range(config.max_iterations):
        bz = b(z)
        ops.append(bz)
        res.append(np.linalg.norm(bz))
        steps.append(2)
        if stop is not None and res[-1] <= stop:
            steps.pop()
            break
        half = z - alpha * bz
        z = z - alpha * b(half)
        halves.append(half)
        zs.append(z)
    else:
        ops.append(problem.operator(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("EG", config, zs, ops, res, steps, 0,
                           extra={"half": halves})


def _run_og(config, problem, z0):
    # z_{k+1} = z_k - alpha B z_k - alpha (B z_k - B z_{k-1}), z_{-1} = z_0
    b = _Counted(problem.operator)
    alpha, stop = config.alpha, config.stop_residual
    z = z0
    cur = b(z)  # warm start
    prev = cur
    zs, ops, res, steps = [z0], [cur], [np.linalg.norm(cur)], []
    for _ in range(config.max_iterations):
        if stop is not None and res[-1] <= stop:
            break
        z = z - alpha * cur - alpha * (cur - prev)
        prev = cur
        cur = b(z)
        steps.append(1)
        zs.append(z)
        ops.append(cur)
        res.append(np.linalg.norm(cur))
    return _finish_forward("OG", config, zs, ops, res, steps, 1)


def _run_agm(config, problem, z0):
    # x_{k+1} = y_k - alpha grad(y_k); y_{k+1} = x_{k+1} + ((t_k-1)/t_{k+1})(x_{k+1}-x_k)
    # with t_k = (k + a - 1) / a
    grad = _Counted(problem.operator)
    alpha, a = config.alpha, config.momentum_a
    x = z0
    y = z0
    xs, ys, ops, res, steps = [z0], [z0], [], [], []
    raw = problem.operator
    for k in range(config.max_iterations):
        ops.append(raw(x))
        res.append(np.linalg.norm(ops[-1]))
        if config.stop_residual is not None and res[-1] <= config.stop_residual:
            break
        t_k = (k + a - 1.0) / a
        t_next = (k + a) / a
        x_new = y - alpha * grad(y)
        y = x_new + ((t_k - 1.0) / t_next) * (x_new - x)
        x = x_new
        steps.append(1)
        xs.append(x)
        ys.append(y)
    else:
        ops.append(raw(x))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("AGM", config, xs, ops, res, steps, 0,
                           extra={"extrapolated": ys})


# ---------------------------------------------------------------------------
# anchored forward methods


def _run_eag(config, problem, z0):
    b = _Counted(problem.operator)
    alpha, stop = config.alpha, config.stop_residual
    z = z0
    zs, ops, res, steps, halves, op_halves = [z0], [], [], [], [], []
    for k in range(config.max_iterations):
        bz = b(z)
        ops.append(bz)
        res.append(np.linalg.norm(bz))
        steps.append(2)
        if stop is not None and res[-1] <= stop:
            steps.pop()
            break
        beta = 1.0 / (k + 1)
        half = beta * z0 + (1.0 - beta) * z - alpha * bz
        bh = b(half)
        z = beta * z0 + (1.0 - beta) * z - alpha * bh
        halves.append(half)
        op_halves.append(bh)
        zs.append(z)
    else:
        ops.append(problem.operator(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("EAG", config, zs, ops, res, steps, 0,
                           extra={"half": halves, "op_half": op_halves})


def _anchored_extragradient(name, config, problem, z0, contraction_x):
    """Shared core of FEG (x = 1) and SM_EAG_PLUS (x = 1 + 2 alpha mu).

    Half step: beta_k z0 + (1-beta_k)(z_k - (alpha/x) B z_k), with
    beta_k the inverse of the geometric sum of x^j. At x = 1 this is FEG
    verbatim (beta_k = 1/(k+1), full damping eta_k = 1 - beta_k), and the
    floating-point expressions coincide bitwise with the mu = 0 case of
    SM_EAG_PLUS.
    """
    b = _Counted(problem.operator)
    alpha, stop = config.alpha, config.stop_residual
    x = contraction_x
    a_eff = alpha / x
    big_s = 1.0
    z = z0
    zs, ops, res, steps, halves, op_halves = [z0], [], [], [], [], []
    for _ in range(config.max_iterations):
        bz = b(z)
        ops.append(bz)
        res.append(np.linalg.norm(bz))
        steps.append(2)
        if stop is not None and res[-1] <= stop:
            steps.pop()
            break
        beta = 1.0 / big_s
        half = beta * z0 + (1.0 - beta) * (z - a_eff * bz)
        bh = b(half)
        z = beta * z0 + (1.0 - beta) * z - alpha * bh
        halves.append(half)
        op_halves.append(bh)
        zs.append(z)
        big_s = 1.0 + x * big_s
    else:
        ops.append(problem.operator(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward(name, config, zs, ops, res, steps, 0,
                           extra={"half": halves, "op_half": op_halves})


def _run_feg(config, problem, z0):
    return _anchored_extragradient("FEG", config, problem, z0, 1.0)


def _run_sm_eag_plus(config, problem, z0):
    x = 1.0 + 2.0 * config.alpha * problem.mu
    return _anchored_extragradient("SM_EAG_PLUS", config, problem, z0, x)


def _run_aps(config, problem, z0):
    # v_{k+1} = beta_k z0 + (1-beta_k) z_k - alpha B v_k, v_0 = z_0
    b = _Counted(problem.operator)
    alpha, stop = config.alpha, config.stop_residual
    raw = problem.operator
    z = z0
    v = z0
    bv = b(v)  # warm start
    zs, vs, op_vs, steps = [z0], [z0], [bv], []
    ops = [raw(z0)]
    res = [np.linalg.norm(ops[-1])]
    for k in range(config.max_iterations):
        if stop is not None and res[-1] <= stop:
            break
        beta = 1.0 / (k + 1)
        v = beta * z0 + (1.0 - beta) * z - alpha * bv
        bv = b(v)
        z = beta * z0 + (1.0 - beta) * z - alpha * bv
        steps.append(1)
        zs.append(z)
        vs.append(v)
        op_vs.append(bv)
        ops.append(raw(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("APS", config, zs, ops, res, steps, 1,
                           extra={"v": vs, "op_v": op_vs})


def _run_eag_v(config, problem, z0):
    # varying steps: alpha_{k+1} = alpha_k (1 - alpha_k^2 L^2 /
    # ((k+1)(k+3)(1 - alpha_k^2 L^2))), beta_k = 1/(k+2)
    b = _Counted(problem.operator)
    lip, stop = problem.lipschitz, config.stop_residual
    alpha = config.alpha
    z = z0
    zs, ops, res, steps, halves, op_halves, alphas = [z0], [], [], [], [], [], [alpha]
    for k in range(config.max_iterations):
        bz = b(z)
        ops.append(bz)
        res.append(np.linalg.norm(bz))
        steps.append(2)
        if stop is not None and res[-1] <= stop:
            steps.pop()
            break
        if alpha <= 0 or 1.0 - alpha ** 2 * lip ** 2 <= 0:
            raise StepSizeCollapse(f"alpha_{k} = {alpha:.6g} inadmissible")
        beta = 1.0 / (k + 2)
        half = beta * z0 + (1.0 - beta) * z - alpha * bz
        bh = b(half)
        z = beta * z0 + (1.0 - beta) * z - alpha * bh
        ratio = alpha ** 2 * lip ** 2 / (1.0 - alpha ** 2 * lip ** 2)
        alpha = alpha * (1.0 - ratio / ((k + 1.0) * (k + 3.0)))
        halves.append(half)
        op_halves.append(bh)
        zs.append(z)
        alphas.append(alpha)
    else:
        ops.append(problem.operator(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("EAG_V", config, zs, ops, res, steps, 0,
                           extra={"half": halves, "op_half": op_halves,
                                  "alpha": alphas})


def _run_aps_v(config, problem, z0):
    b = _Counted(problem.operator)
    raw = problem.operator
    lip, stop = problem.lipschitz, config.stop_residual
    m_const = 2.0 * lip ** 2 * (1.0 + config.theta)
    alpha = config.alpha
    z = z0
    v = z0
    bv = b(v)
    zs, vs, op_vs, steps, alphas = [z0], [z0], [bv], [], [alpha]
    ops = [raw(z0)]
    res = [np.linalg.norm(ops[-1])]
    for k in range(config.max_iterations):
        if stop is not None and res[-1] <= stop:
            break
        if alpha <= 0:
            raise StepSizeCollapse(f"alpha_{k} = {alpha:.6g} <= 0")
        if 1.0 - m_const * alpha ** 2 <= 0:
            raise StepSizeCollapse(
                f"1 - 2 L^2 (1+theta) alpha_{k}^2 <= 0 at k = {k}")
        beta = 1.0 / (k + 2)
        v = beta * z0 + (1.0 - beta) * z - alpha * bv
        bv = b(v)
        z = beta * z0 + (1.0 - beta) * z - alpha * bv
        beta_next = 1.0 / (k + 3)
        alpha = (alpha * beta_next * (1.0 - beta ** 2 - m_const * alpha ** 2)
                 / ((1.0 - m_const * alpha ** 2) * beta * (1.0 - beta)))
        steps.append(1)
        zs.append(z)
        vs.append(v)
        op_vs.append(bv)
        alphas.append(alpha)
        ops.append(raw(z))
        res.append(np.linalg.norm(ops[-1]))
    return _finish_forward("APS_V", config, zs, ops, res, steps, 1,
                           extra={"v": vs, "op_v": op_vs, "alpha": alphas})


# ---------------------------------------------------------------------------
# anchored proximal methods


def _halpern_loop(name, config, problem, z0, beta_of):
    """w_{k+1/2} = beta_k w0 + (1-beta_k) w_k; w_{k+1} = J_{alpha B}(w_{k+1/2})."""
    op = _Counted(problem.operator)
    alpha, tol, stop = config.alpha, config.resolvent_tolerance, config.stop_residual
    w = z0
    ws, halves, res, steps = [z0], [], [], []
    try:
        ops = [problem.operator(z0)]
    except Exception:
        ops = None
    for k in range(config.max_iterations):
        beta = beta_of(k)
        half = beta * z0 + (1.0 - beta) * w
        w = op.resolvent(alpha, half, tol)
        steps.append(1)
        halves.append(half)
        ws.append(w)
        res.append(np.linalg.norm(half - w))
        if ops is not None:
            ops.append(problem.operator(w))
        if stop is not None and res[-1] <= stop:
            break
    # final half-point residual, instrumentation only
    k = len(ws) - 1
    beta = beta_of(k)
    half = beta * z0 + (1.0 - beta) * w
    halves.append(half)
    res.append(np.linalg.norm(half - problem.operator.resolvent(alpha, half, tol)))
    record = config.record_iterates
    return IterateTrace(
        algorithm=name,
        main=np.array(ws if record else [ws[0], ws[-1]]),
        residual_norms=np.array(res),
        auxiliary={"half": np.array(halves)} if record else {},
        op_evals=np.array(ops) if (record and ops is not None) else None,
        b_per_iter=np.zeros(len(steps), dtype=int),
        resolvent_per_iter=np.array(steps, dtype=int),
        warmup_b=0,
        params={"alpha": config.alpha, "gamma": config.gamma,
                "max_iterations": config.max_iterations,
                "record_iterates": record},
    )


def _run_ohm(config, problem, z0):
    return _halpern_loop("OHM", config, problem, z0, lambda k: 1.0 / (k + 1))


def _run_oc_halpern(config, problem, z0):
    gamma = config.gamma
    if gamma is None:
        gamma = math.sqrt(1.0 + 2.0 * config.alpha * problem.mu)
    gamma_sq = gamma * gamma
    sums = [1.0]

    def beta_of(k):
        while len(sums) <= k:
            sums.append(1.0 + gamma_sq * sums[-1])
        return 1.0 / sums[k]

    return _halpern_loop("OC_HALPERN", replace(config, gamma=gamma),
                         problem, z0, beta_of)


def ohm_u_form(problem: Problem, alpha: float, iterations: int, z0,
               tol: float = 1e-12) -> Array:
    """Single-sequence form u_{k+1} = u0/(k+2) + (k+1)/(k+2) T(u_k).

    Equivalent to the half-step form under u_k = w_{k+1/2}; exposed for the
    two-form equivalence check.
    """
    z0 = as_vector(z0, problem.dim)
    u = z0
    us = [z0]
    for k in range(iterations):
        beta = 1.0 / (k + 2)
        u = beta * z0 + (1.0 - beta) * problem.operator.resolvent(alpha, u, tol)
        us.append(u)
    return np.array(us)


def _run_ohm_drs(config, problem, z0):
    # w_k = J_{alpha B}(u_k); u_{k+1} = beta_k u0 + (1-beta_k)
    #       (J_{alpha A}(w_k - alpha B w_k) + alpha B w_k); beta_k = 1/(k+2)
    a_op = problem.prox_part
    b_op = _Counted(problem.operator)
    alpha, tol = config.alpha, config.resolvent_tolerance
    u = z0
    us, ws, vs, ops, res = [z0], [], [], [], []
    b_steps, r_steps = [], []
    for k in range(config.max_iterations + 1):
        w = b_op.resolvent(alpha, u, tol)
        bw = b_op(w)
        v = a_op.resolvent(alpha, w - alpha * bw, tol)
        ws.append(w)
        vs.append(v)
        ops.append(bw)
        res.append(np.linalg.norm(w - v))  # = alpha ||G_alpha(w_k)||
        b_steps.append(1)
        r_steps.append(2)
        if k < config.max_iterations:
            beta = 1.0 / (k + 2)
            u = beta * z0 + (1.0 - beta) * (v + alpha * bw)
            us.append(u)
        if config.stop_residual is not None and res[-1] <= config.stop_residual:
            break
    record = config.record_iterates
    n = len(ws)
    return IterateTrace(
        algorithm="OHM_DRS",
        main=np.array(us[:n] if record else [us[0], us[n - 1]]),
        residual_norms=np.array(res),
        auxiliary={"w": np.array(ws), "v": np.array(vs),
                   "op_w": np.array(ops)} if record else {},
        op_evals=None,
        b_per_iter=np.array(b_steps, dtype=int),
        resolvent_per_iter=np.array(r_steps, dtype=int),
        warmup_b=0,
        params={"alpha": alpha, "max_iterations": config.max_iterations,
                "counts_per_row": True, "record_iterates": record},
    )


def _run_apg_star(config, problem, z0):
    # z_k solves ||z + alpha B z - xi_k|| <= eps_k by anchored extragradient
    # from xi_k; xi_{k+1} = beta_k xi_0 + (1-beta_k)(J_{alpha A}(z_k -
    # alpha B z_k) + alpha B z_k); beta_k = 1/(k+2)
    a_op = problem.prox_part
    b_op = _Counted(problem.operator)
    alpha, lip = config.alpha, problem.lipschitz
    shifted_l = 1.0 + alpha * lip
    b_xi0 = b_op(z0)
    warmup = 1
    m_const = 1.0 + (np.linalg.norm(b_xi0) / lip if lip > 0 else 0.0)
    xi = z0
    xis, zs, ops, res = [z0], [], [], []
    inner_evals, b_steps, r_steps = [], [], []
    for k in range(config.max_iterations + 1):
        eps_k = m_const / ((k + 1.0) ** 2 * (k + 2.0))
        z, evals = solve_strongly_monotone(
            lambda u: u + alpha * b_op(u) - xi,
            mu=1.0, lipschitz=shifted_l, z0=xi, tol=eps_k)
        bz = b_op(z)
        v = a_op.resolvent(alpha, z - alpha * bz, config.resolvent_tolerance)
        zs.append(z)
        ops.append(bz)
        res.append(np.linalg.norm(z - v) / alpha)  # ||G_alpha(z_k)||
        inner_evals.append(evals)
        b_steps.append(evals + 1)
        r_steps.append(1)
        if k < config.max_iterations:
            beta = 1.0 / (k + 2)
            xi = beta * z0 + (1.0 - beta) * (v + alpha * bz)
            xis.append(xi)
        if config.stop_residual is not None and res[-1] <= config.stop_residual:
            break
    record = config.record_iterates
    n = len(zs)
    return IterateTrace(
        algorithm="APG_STAR",
        main=np.array(xis[:n] if record else [xis[0], xis[n - 1]]),
        residual_norms=np.array(res),
        auxiliary={"z": np.array(zs), "op_z": np.array(ops),
                   "inner_b_evals": np.array(inner_evals, dtype=int)}
        if record else {"inner_b_evals": np.array(inner_evals, dtype=int)},
        op_evals=None,
        b_per_iter=np.array(b_steps, dtype=int),
        resolvent_per_iter=np.array(r_steps, dtype=int),
        warmup_b=warmup,
        params={"alpha": alpha, "max_iterations": config.max_iterations,
                "m_constant": m_const, "counts_per_row": True,
                "record_iterates": record},
    )


_STEPPERS = {
    "GDA": _run_gda,
    "EG": _run_eg,
    "OG": _run_og,
    "AGM": _run_agm,
    "EAG": _run_eag,
    "EAG_V": _run_eag_v,
    "FEG": _run_feg,
    "APS": _run_aps,
    "APS_V": _run_aps_v,
    "OHM": _run_ohm,
    "OC_HALPERN": _run_oc_halpern,
    "SM_EAG_PLUS": _run_sm_eag_plus,
    "OHM_DRS": _run_ohm_drs,
    "APG_STAR": _run_apg_star,
}
