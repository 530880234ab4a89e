"""Monotone operators on R^d: forward evaluation, resolvents, proximal maps.

Every operator carries exact regularity metadata (Lipschitz constant and
strong-monotonicity modulus) supplied at construction; nothing is estimated
at runtime. Operators are immutable after construction and safe to share.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import (
    DimensionMismatch,
    DomainViolation,
    InfeasibleConstants,
    InnerLoopBudgetExceeded,
    NoForwardEvaluation,
    NoResolventCapability,
)

Array = np.ndarray

#: slack used when verifying metadata against computed spectra
_META_SLACK = 1e-9

#: default tolerance for iterative resolvents (configuration knob)
DEFAULT_RESOLVENT_TOL = 1e-12


def as_vector(coords, dim: int | None = None) -> Array:
    """Validate ``coords`` as a finite float64 vector of positive dimension."""
    v = np.asarray(coords, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch(f"expected a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.size}")
    return v


def solve_strongly_monotone(fn, mu: float, lipschitz: float, z0: Array,
                            tol: float, max_iterations: int | None = None):
    """Drive ``||fn(z)|| <= tol`` for a strongly monotone Lipschitz map.

    Runs the anchored extragradient recursion for a ``mu``-strongly monotone,
    ``lipschitz``-Lipschitz single-valued map with the admissible-maximal step
    ``(sqrt(L^2 + mu^2) + mu) / L^2``, anchor weights given by inverse
    geometric sums, and the matching damped half-step. Converges linearly,
    so the default budget ``10 * (L / mu) * log(1/tol)`` is generous.

    Returns ``(z, n_evals)`` where ``n_evals`` counts calls to ``fn``.
    Raises InnerLoopBudgetExceeded past the budget.
    """
    if mu <= 0 or lipschitz < mu:
        raise InfeasibleConstants(f"need 0 < mu <= L, got mu={mu}, L={lipschitz}")
    step = (math.hypot(lipschitz, mu) + mu) / lipschitz ** 2
    x = 1.0 + 2.0 * step * mu
    if max_iterations is None:
        max_iterations = max(20, math.ceil(
            10.0 * (lipschitz / mu) * max(1.0, math.log(1.0 / tol))))
    anchor = np.array(z0, dtype=float)
    z = anchor.copy()
    val = fn(z)
    evals = 1
    big_s = 1.0  # sum of x^j, j = 0..k
    for _ in range(max_iterations):
        if np.linalg.norm(val) <= tol:
            return z, evals
        beta = 1.0 / big_s
        half = beta * anchor + (1.0 - beta) * (z - (step / x) * val)
        vh = fn(half)
        z = beta * anchor + (1.0 - beta) * z - step * vh
        val = fn(z)
        evals += 2
        big_s = 1.0 + x * big_s
    if np.linalg.norm(val) <= tol:
        return z, evals
    raise InnerLoopBudgetExceeded(
        f"residual {np.linalg.norm(val):.3e} > tol {tol:.3e} "
        f"after {max_iterations} iterations")


class Operator:
    """Base class. Subclasses set ``dim``, ``lipschitz`` and ``mu``.

    ``mu`` is the strong-monotonicity modulus (0 means merely monotone).
    """

    dim: int
    lipschitz: float
    mu: float

    def __call__(self, z: Array) -> Array:
        raise NoForwardEvaluation(f"{type(self).__name__} has no forward evaluation")

    @property
    def resolvent_kind(self) -> str | None:
        """One of 'affine', 'prox', 'iterative', or None."""
        return None

    def resolvent(self, alpha: float, z: Array, tol: float = DEFAULT_RESOLVENT_TOL) -> Array:
        """Return u with z = u + alpha * op(u)."""
        raise NoResolventCapability(f"{type(self).__name__} has no resolvent")

    def _check_dim(self, z: Array) -> None:
        if z.shape != (self.dim,):
            raise DimensionMismatch(
                f"operator on R^{self.dim} evaluated at shape {z.shape}")


class ZeroOperator(Operator):
    """The zero map; its resolvent is the identity."""

    def __init__(self, dim: int):
        if dim <= 0:
            raise DimensionMismatch("dimension must be positive")
        self.dim = int(dim)
        self.lipschitz = 0.0
        self.mu = 0.0

    def __call__(self, z):
        self._check_dim(z)
        return np.zeros(self.dim)

    @property
    def resolvent_kind(self):
        return "affine"

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        self._check_dim(z)
        return np.array(z, dtype=float)


class AffineOperator(Operator):
    """z -> M z + b with exact spectral metadata.

    If ``lipschitz``/``mu`` are omitted they are computed from the matrix
    (2-norm and smallest eigenvalue of the symmetric part); if supplied they
    are verified against the spectrum at construction. The matrix must be
    monotone: min eig of (M + M^T)/2 >= -1e-9.
    """

    def __init__(self, matrix, offset=None, lipschitz=None, mu=None):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionMismatch(f"expected a square matrix, got {m.shape}")
        self.dim = m.shape[0]
        self.matrix = m.copy()
        self.offset = (np.zeros(self.dim) if offset is None
                       else as_vector(offset, self.dim).copy())
        sym_min = float(np.linalg.eigvalsh(0.5 * (m + m.T)).min())
        two_norm = float(np.linalg.norm(m, 2))
        if sym_min < -_META_SLACK:
            raise InfeasibleConstants(
                f"matrix is not monotone: min sym eigenvalue {sym_min:.3e}")
        if lipschitz is None:
            lipschitz = two_norm
        elif two_norm > lipschitz + _META_SLACK:
            raise InfeasibleConstants(
                f"||M||_2 = {two_norm:.6g} exceeds declared L = {lipschitz:.6g}")
        if mu is None:
            mu = max(sym_min, 0.0)
        elif sym_min < mu - _META_SLACK:
            raise InfeasibleConstants(
                f"min sym eigenvalue {sym_min:.6g} below declared mu = {mu:.6g}")
        if mu > 0 and lipschitz > 0 and mu > lipschitz + _META_SLACK:
            raise InfeasibleConstants(f"mu = {mu} exceeds L = {lipschitz}")
        self.lipschitz = float(lipschitz)
        self.mu = float(mu)
        self._lu_cache: dict[float, tuple] = {}
        self.matrix.setflags(write=False)
        self.offset.setflags(write=False)

    def __call__(self, z):
        self._check_dim(z)
        return self.matrix @ z + self.offset

    @property
    def resolvent_kind(self):
        return "affine"

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        # direct dense solve of (I + alpha M) u = z - alpha b, LU cached per alpha
        self._check_dim(z)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        factors = self._lu_cache.get(alpha)
        if factors is None:
            factors = lu_factor(np.eye(self.dim) + alpha * self.matrix)
            self._lu_cache[alpha] = factors
        return lu_solve(factors, z - alpha * self.offset)


class CallableOperator(Operator):
    """Wraps a forward map with declared constants and an optional open domain."""

    def __init__(self, fn, dim, lipschitz, mu=0.0, domain=None):
        self.fn = fn
        self.dim = int(dim)
        self.lipschitz = float(lipschitz)
        self.mu = float(mu)
        self.domain = domain
        if self.mu < 0 or self.lipschitz < 0:
            raise InfeasibleConstants("constants must be nonnegative")
        if self.mu > 0 and self.mu > self.lipschitz + _META_SLACK:
            raise InfeasibleConstants(f"mu = {mu} exceeds L = {lipschitz}")

    def __call__(self, z):
        self._check_dim(z)
        if self.domain is not None and not self.domain(z):
            raise DomainViolation(f"point {z} outside the open domain")
        return self.fn(z)

    @property
    def resolvent_kind(self):
        return "iterative"

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        # run the strongly monotone solver on u -> u + alpha*op(u) - z,
        # which is 1-strongly monotone and (1 + alpha L)-Lipschitz
        self._check_dim(z)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        shifted_l = 1.0 + alpha * self.lipschitz
        budget = max(20, math.ceil(10.0 * shifted_l * max(1.0, math.log(1.0 / tol))))
        u, _ = solve_strongly_monotone(
            lambda w: w + alpha * self(w) - z,
            mu=1.0, lipschitz=shifted_l, z0=z, tol=tol, max_iterations=budget)
        return u


class GradientOperator(CallableOperator):
    """Gradient field of a differentiable convex objective."""

    def __init__(self, grad, dim, lipschitz, value=None, domain=None, mu=0.0):
        super().__init__(grad, dim, lipschitz, mu=mu, domain=domain)
        self.value = value

    def objective(self, z):
        if self.value is None:
            raise NoForwardEvaluation("no objective value attached")
        if self.domain is not None and not self.domain(z):
            raise DomainViolation(f"point {z} outside the open domain")
        return self.value(z)


class SaddleOperator(CallableOperator):
    """Stacked (grad_x L, -grad_y L) map of a differentiable convex-concave L."""

    def __init__(self, fn, x_dim, y_dim, lipschitz, value=None, mu=0.0, domain=None):
        super().__init__(fn, x_dim + y_dim, lipschitz, mu=mu, domain=domain)
        self.x_dim = int(x_dim)
        self.y_dim = int(y_dim)
        self.value = value  # scalar L(x, y) on the stacked vector


class ShiftedIdentityPlus(Operator):
    """z -> z + alpha * base(z) - shift.

    One-strongly monotone and (1 + alpha L)-Lipschitz when the base is
    monotone and L-Lipschitz; this is the inner-loop operator used to
    evaluate resolvents by forward iterations.
    """

    def __init__(self, base: Operator, alpha: float, shift):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.base = base
        self.alpha = float(alpha)
        self.shift = as_vector(shift, base.dim).copy()
        self.shift.setflags(write=False)
        self.dim = base.dim
        self.lipschitz = 1.0 + alpha * base.lipschitz
        self.mu = 1.0 + alpha * base.mu

    def __call__(self, z):
        self._check_dim(z)
        return z + self.alpha * self.base(z) - self.shift

    @property
    def resolvent_kind(self):
        return "iterative"

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        self._check_dim(z)
        budget = max(20, math.ceil(
            10.0 * (1.0 + alpha * self.lipschitz) * max(1.0, math.log(1.0 / tol))))
        u, _ = solve_strongly_monotone(
            lambda w: w + alpha * self(w) - z,
            mu=1.0 + alpha * self.mu, lipschitz=1.0 + alpha * self.lipschitz,
            z0=z, tol=tol, max_iterations=budget)
        return u


class ScaledOperator(Operator):
    """c * base for c > 0; the resolvent delegates to the base at step c*alpha."""

    def __init__(self, scale: float, base: Operator):
        if scale <= 0:
            raise ValueError("scale must be positive")
        self.scale = float(scale)
        self.base = base
        self.dim = base.dim
        self.lipschitz = scale * base.lipschitz
        self.mu = scale * base.mu

    def __call__(self, z):
        return self.scale * self.base(z)

    @property
    def resolvent_kind(self):
        return self.base.resolvent_kind

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        return self.base.resolvent(alpha * self.scale, z, tol)


class SumOperator(Operator):
    """Pointwise sum of forward-evaluable operators."""

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ValueError("need at least one operator")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed dimensions {dims}")
        self.parts = parts
        self.dim = parts[0].dim
        self.lipschitz = float(sum(p.lipschitz for p in parts))
        self.mu = float(sum(p.mu for p in parts))

    def __call__(self, z):
        out = self.parts[0](z)
        for p in self.parts[1:]:
            out = out + p(z)
        return out

    @property
    def resolvent_kind(self):
        return "iterative"

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        self._check_dim(z)
        budget = max(20, math.ceil(
            10.0 * (1.0 + alpha * self.lipschitz) * max(1.0, math.log(1.0 / tol))))
        u, _ = solve_strongly_monotone(
            lambda w: w + alpha * self(w) - z,
            mu=1.0 + alpha * self.mu, lipschitz=1.0 + alpha * self.lipschitz,
            z0=z, tol=tol, max_iterations=budget)
        return u


# ---------------------------------------------------------------------------
# proximal maps


@dataclass(frozen=True)
class BoxProx:
    """Indicator of a coordinatewise box; prox is the clamp, for any alpha."""

    lower: Array
    upper: Array

    def __post_init__(self):
        lo = as_vector(self.lower)
        hi = as_vector(self.upper, lo.size)
        if np.any(lo > hi):
            raise ValueError("box needs lower <= upper coordinatewise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self):
        return self.lower.size

    def apply(self, alpha, x):
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class BallProx:
    """Indicator of a Euclidean ball; prox is the radial projection."""

    center: Array
    radius: float

    def __post_init__(self):
        c = as_vector(self.center)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def dim(self):
        return self.center.size

    def apply(self, alpha, x):
        diff = x - self.center
        nrm = np.linalg.norm(diff)
        if nrm <= self.radius:
            return np.array(x, dtype=float)
        return self.center + (self.radius / nrm) * diff


@dataclass(frozen=True)
class L1Prox:
    """weight * ||.||_1; prox is soft-thresholding at level weight*alpha."""

    weight: float

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")

    dim = None  # any dimension

    def apply(self, alpha, x):
        t = self.weight * alpha
        return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


@dataclass(frozen=True)
class QuadraticProx:
    """f(x) = x'Qx/2 + c'x with Q symmetric PSD; prox solves a linear system."""

    quad: Array
    linear: Array

    def __post_init__(self):
        q = np.asarray(self.quad, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DimensionMismatch("Q must be square")
        if not np.allclose(q, q.T, atol=1e-12):
            raise ValueError("Q must be symmetric")
        if np.linalg.eigvalsh(q).min() < -1e-9:
            raise ValueError("Q must be positive semidefinite")
        c = as_vector(self.linear, q.shape[0])
        q = q.copy()
        q.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "quad", q)
        object.__setattr__(self, "linear", c)

    @property
    def dim(self):
        return self.linear.size

    def apply(self, alpha, x):
        return np.linalg.solve(np.eye(self.dim) + alpha * self.quad,
                               x - alpha * self.linear)


@dataclass(frozen=True)
class ZeroProx:
    """The zero function; prox is the identity."""

    dim = None

    def apply(self, alpha, x):
        return np.array(x, dtype=float)


def prox(spec, alpha: float, x) -> Array:
    """Exact minimizer of alpha*f(x') + ||x' - x||^2 / 2 for the given spec."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    v = as_vector(x, getattr(spec, "dim", None))
    return spec.apply(alpha, v)


class BlockProxOperator(Operator):
    """Saddle subdifferential represented only through blockwise prox maps.

    ``blocks`` is a sequence of (prox spec, width) pairs covering the stacked
    vector; the resolvent applies each prox to its slice. No forward
    evaluation exists (the underlying operator is set-valued).
    """

    def __init__(self, blocks):
        blocks = tuple(blocks)
        if not blocks:
            raise ValueError("need at least one block")
        widths = []
        for spec, width in blocks:
            width = int(width)
            if width <= 0:
                raise DimensionMismatch("block widths must be positive")
            if spec.dim is not None and spec.dim != width:
                raise DimensionMismatch(
                    f"spec dimension {spec.dim} != block width {width}")
            widths.append(width)
        self.blocks = blocks
        self.dim = sum(widths)
        self.lipschitz = math.inf
        self.mu = 0.0

    @property
    def resolvent_kind(self):
        return "prox"

    def resolvent(self, alpha, z, tol=DEFAULT_RESOLVENT_TOL):
        self._check_dim(z)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        out = np.empty(self.dim)
        at = 0
        for spec, width in self.blocks:
            out[at:at + width] = spec.apply(alpha, z[at:at + width])
            at += width
        return out


# ---------------------------------------------------------------------------
# derived maps


def _as_resolvent_part(a, dim):
    """Accept an Operator, a single prox spec, or a (spec_x, spec_y)-style list."""
    if isinstance(a, Operator):
        return a
    if isinstance(a, (list, tuple)):
        return BlockProxOperator(a)
    return BlockProxOperator([(a, dim)])


def forward_backward_residual(a_part, b_op: Operator, alpha: float, z,
                              tol: float = DEFAULT_RESOLVENT_TOL) -> Array:
    """G_alpha(z) = (z - J_{alpha A}(z - alpha B z)) / alpha.

    Vanishes exactly at solutions of 0 in (A + B)(z). ``a_part`` may be an
    operator, a prox spec, or a list of (spec, width) blocks.
    """
    z = as_vector(z, b_op.dim)
    a_op = _as_resolvent_part(a_part, b_op.dim)
    backward = a_op.resolvent(alpha, z - alpha * b_op(z), tol)
    return (z - backward) / alpha


def drs_map(a_op: Operator, b_op: Operator, alpha: float, u,
            tol: float = DEFAULT_RESOLVENT_TOL) -> Array:
    """Douglas-Rachford map u - J_{alpha B}(u) + J_{alpha A}(2 J_{alpha B}(u) - u).

    Fixed points u* satisfy J_{alpha B}(u*) in Zer(A + B).
    """
    u = as_vector(u, b_op.dim)
    w = b_op.resolvent(alpha, u, tol)
    v = a_op.resolvent(alpha, 2.0 * w - u, tol)
    return u - w + v
