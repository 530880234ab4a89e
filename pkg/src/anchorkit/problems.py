"""Concrete problem instances: bilinear saddles, seeded random monotone and
strongly monotone affine operators, the 2-d convex benchmark, and composite
(prox + smooth) splittings.

Generators construct operators whose (L, mu) metadata is exact by
construction; the rate and bound checks divide by these constants.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, InfeasibleConstants, SingularSystem
from .operators import (
    AffineOperator,
    Array,
    BlockProxOperator,
    BoxProx,
    GradientOperator,
    Operator,
    as_vector,
)

_SOLUTION_SLACK = 1e-9


@dataclass(frozen=True)
class Problem:
    """A monotone inclusion 0 in (A + B)(z).

    ``operator`` is the forward-evaluable part B. ``prox_part`` (A) is present
    only for composite problems and is touched exclusively through its
    resolvent. ``solution`` is a point z* with 0 in (A + B)(z*) when known
    by construction.
    """

    name: str
    operator: Operator
    prox_part: Operator | None = None
    solution: Array | None = None
    start: Array | None = None
    notes: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.operator.dim

    @property
    def lipschitz(self) -> float:
        return self.operator.lipschitz

    @property
    def mu(self) -> float:
        return self.operator.mu

    @property
    def is_composite(self) -> bool:
        return self.prox_part is not None


def _saddle_matrix(coupling: Array) -> Array:
    """Block skew map of L(x, y) = x'Ay: (x, y) -> (Ay, -A'x)."""
    m, n = coupling.shape[0], coupling.shape[1]
    out = np.zeros((m + n, m + n))
    out[:m, m:] = coupling
    out[m:, :m] = -coupling.T
    return out


def make_bilinear(coupling, x_shift=None, y_shift=None, want_solution=True,
                  name="bilinear") -> Problem:
    """Saddle problem L(x, y) = x'Ay + b'x - c'y.

    The saddle operator is the affine skew map (Ay + b, -A'x + c), merely
    monotone with L = ||A||_2. With ``want_solution`` the stationarity system
    is solved; SingularSystem is raised if it has no unique solution (except
    for the all-zero operator, where the origin is the solution by
    convention).
    """
    a = np.atleast_2d(np.asarray(coupling, dtype=float))
    m, n = a.shape
    b = np.zeros(m) if x_shift is None else as_vector(x_shift, m)
    c = np.zeros(n) if y_shift is None else as_vector(y_shift, n)
    mat = _saddle_matrix(a)
    shift = np.concatenate([b, c])
    lip = float(np.linalg.norm(a, 2)) if a.size else 0.0
    solution = None
    if want_solution:
        if lip == 0.0 and not shift.any():
            solution = np.zeros(m + n)
        else:
            sigma = np.linalg.svd(mat, compute_uv=False)
            if sigma.size == 0 or sigma.min() <= 1e-12 * max(sigma.max(), 1.0):
                raise SingularSystem(
                    "stationarity system has no unique solution; "
                    "pass want_solution=False")
            solution = np.linalg.solve(mat, -shift)
    op = AffineOperator(mat, shift, lipschitz=lip, mu=0.0)

    def saddle_value(z):
        x, y = z[:m], z[m:]
        return float(x @ (a @ y) + b @ x - c @ y)

    return Problem(name=name, operator=op, solution=solution,
                   notes={"x_dim": m, "y_dim": n, "saddle_value": saddle_value})


def make_random_monotone_affine(seed, d, lipschitz, z_star=None,
                                name=None) -> Problem:
    """Seeded merely monotone affine operator B(z) = Mz + b with ||M||_2 = L.

    M is a random skew-symmetric matrix rescaled so the Lipschitz constant is
    exact; the symmetric part is identically zero, so mu = 0 exactly. ``d``
    must be even for M to be invertible (skew matrices of odd dimension are
    singular). b is chosen so that z_star is the unique zero.
    """
    if d <= 0 or d % 2:
        raise DimensionMismatch("need a positive even dimension")
    if lipschitz <= 0:
        raise InfeasibleConstants("lipschitz must be positive")
    rng = np.random.default_rng(seed)
    k = rng.standard_normal((d, d))
    k = k - k.T
    norm = np.linalg.norm(k, 2)
    if norm == 0.0:
        raise SingularSystem("degenerate draw")
    mat = (lipschitz / norm) * k
    sigma = np.linalg.svd(mat, compute_uv=False)
    if sigma.min() <= 1e-9 * sigma.max():
        raise SingularSystem(f"seed {seed} produced a near-singular matrix")
    zs = np.zeros(d) if z_star is None else as_vector(z_star, d)
    op = AffineOperator(mat, -mat @ zs, lipschitz=lipschitz, mu=0.0)
    return Problem(name=name or f"monotone-affine-{seed}", operator=op,
                   solution=zs, notes={"seed": seed})


def _scsc_matrix(rng, d, lipschitz, mu):
    """mu*I + s*(H + K) with H PSD shifted to min eigenvalue 0 and K skew,
    jointly scaled so that lambda_min of the symmetric part is mu and the
    2-norm is ``lipschitz``, both verified by an eigensolve."""
    h = rng.standard_normal((d, d))
    h = h @ h.T
    h = h - np.linalg.eigvalsh(h).min() * np.eye(d)
    k = rng.standard_normal((d, d))
    k = k - k.T
    base = h + k
    eye = np.eye(d)

    def gap(s):
        return np.linalg.norm(mu * eye + s * base, 2) - lipschitz

    hi = 1.0
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e12:
            raise InfeasibleConstants("could not reach the requested norm")
    s = brentq(gap, 0.0, hi, xtol=1e-15, rtol=8.9e-16)
    mat = mu * eye + s * base
    sym_min = np.linalg.eigvalsh(0.5 * (mat + mat.T)).min()
    two_norm = np.linalg.norm(mat, 2)
    if abs(sym_min - mu) > _SOLUTION_SLACK or abs(two_norm - lipschitz) > _SOLUTION_SLACK:
        raise InfeasibleConstants(
            f"rescale missed targets: sym_min={sym_min!r}, norm={two_norm!r}")
    return mat


def make_random_scsc(seed, d, lipschitz, mu, z_star=None, name=None) -> Problem:
    """Seeded strongly monotone affine operator with exact constants.

    Requires 0 < mu <= lipschitz; the scalar case d = 1 forces mu == lipschitz.
    B(z) = Mz + b vanishes at z_star (b = -M z_star, exact in floating point).
    """
    if mu <= 0:
        raise InfeasibleConstants("generator requires mu > 0; "
                                  "use make_bilinear or "
                                  "make_random_monotone_affine for mu = 0")
    if mu > lipschitz:
        raise InfeasibleConstants(f"mu = {mu} exceeds L = {lipschitz}")
    if d <= 0:
        raise DimensionMismatch("dimension must be positive")
    if d == 1 and mu != lipschitz:
        raise InfeasibleConstants("d = 1 forces mu == lipschitz")
    rng = np.random.default_rng(seed)
    if mu == lipschitz:
        mat = mu * np.eye(d)
    else:
        mat = _scsc_matrix(rng, d, lipschitz, mu)
    zs = np.zeros(d) if z_star is None else as_vector(z_star, d)
    op = AffineOperator(mat, -mat @ zs, lipschitz=lipschitz, mu=mu)
    return Problem(name=name or f"scsc-{seed}", operator=op, solution=zs,
                   notes={"seed": seed})


#: caption defaults for the 2-d convex benchmark
FIGURE1_START = (-2.0, 3.0)
FIGURE1_AGM_STEP = 0.025
FIGURE1_ANCHORED_STEP = 0.1
#: smoothness bound valid on the region the default runs traverse (x2 >= 1)
FIGURE1_LIPSCHITZ = 8.0


def make_figure1() -> Problem:
    """Convex minimization of f(x1, x2) = 4 x1^2 / x2 on the open domain x2 > 0.

    Gradient (8 x1/x2, -4 x1^2/x2^2); minimizers are the ray x1 = 0. Ships
    the benchmark defaults: start (-2, 3), momentum-method step 0.025 and
    anchored-method step 0.1 (both overridable by the caller).
    """

    def value(z):
        return 4.0 * z[0] ** 2 / z[1]

    def grad(z):
        x1, x2 = z
        return np.array([8.0 * x1 / x2, -4.0 * x1 ** 2 / x2 ** 2])

    op = GradientOperator(grad, dim=2, lipschitz=FIGURE1_LIPSCHITZ,
                          value=value, domain=lambda z: z[1] > 0.0)
    return Problem(name="figure1", operator=op,
                   start=np.array(FIGURE1_START),
                   notes={"agm_step": FIGURE1_AGM_STEP,
                          "anchored_step": FIGURE1_ANCHORED_STEP})


def make_composite(prox_x, prox_y, smooth: Problem, name=None) -> Problem:
    """Composite splitting: A acts blockwise as (prox_x, prox_y), B is the
    smooth problem's saddle operator.

    The x/y widths come from the smooth problem; pass ``prox_y=None`` for a
    plain (non-saddle) smooth part, in which case prox_x covers the whole
    space.
    """
    d = smooth.dim
    if prox_y is None:
        blocks = [(prox_x, d)]
    else:
        if "x_dim" not in smooth.notes:
            raise DimensionMismatch(
                "smooth problem lacks x/y split; pass prox_y=None")
        blocks = [(prox_x, smooth.notes["x_dim"]),
                  (prox_y, smooth.notes["y_dim"])]
    a_part = BlockProxOperator(blocks)
    return Problem(name=name or f"composite-{smooth.name}",
                   operator=smooth.operator, prox_part=a_part,
                   start=smooth.start,
                   notes=dict(smooth.notes))


def make_box_bilinear_composite(seed, box_lower=0.0, box_upper=1.0,
                                shift_scale=0.5, size=2, name=None) -> Problem:
    """Box-constrained bilinear saddle: indicator boxes plus a seeded coupling."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((size, size))
    b = shift_scale * rng.standard_normal(size)
    c = shift_scale * rng.standard_normal(size)
    smooth = make_bilinear(a, b, c, want_solution=False)
    lo = np.full(size, float(box_lower))
    hi = np.full(size, float(box_upper))
    composite = make_composite(BoxProx(lo, hi), BoxProx(lo, hi), smooth,
                               name=name or f"box-bilinear-{seed}")
    composite.notes["seed"] = seed
    return composite


PROBLEM_BUILDERS = {
    "bilinear": make_bilinear,
    "random_monotone_affine": make_random_monotone_affine,
    "random_scsc": make_random_scsc,
    "figure1": make_figure1,
    "box_bilinear_composite": make_box_bilinear_composite,
}


def build_problem(name: str, params: dict | None = None) -> Problem:
    """Construct a problem by registry name and parameter map (CLI entry)."""
    if name not in PROBLEM_BUILDERS:
        raise KeyError(f"unknown problem {name!r}; "
                       f"known: {sorted(PROBLEM_BUILDERS)}")
    return PROBLEM_BUILDERS[name](**(params or {}))
