import numpy as np
import pytest

from anchorkit.errors import (
    DimensionMismatch,
    DomainViolation,
    InfeasibleConstants,
    InnerLoopBudgetExceeded,
    NoForwardEvaluation,
)
from anchorkit.operators import (
    AffineOperator,
    BallProx,
    BlockProxOperator,
    BoxProx,
    CallableOperator,
    L1Prox,
    QuadraticProx,
    ScaledOperator,
    ShiftedIdentityPlus,
    SumOperator,
    ZeroOperator,
    ZeroProx,
    as_vector,
    drs_map,
    forward_backward_residual,
    prox,
    solve_strongly_monotone,
)

ROT = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_as_vector_validation():
    v = as_vector([1.0, 2.0])
    assert v.dtype == np.float64
    with pytest.raises(ValueError):
        as_vector([1.0, np.nan])
    with pytest.raises(DimensionMismatch):
        as_vector([])
    with pytest.raises(DimensionMismatch):
        as_vector([1.0, 2.0], dim=3)


def test_zero_operator():
    op = ZeroOperator(2)
    assert np.array_equal(op(np.array([3.0, -1.0])), np.zeros(2))
    z = np.array([0.7, -0.2])
    assert np.array_equal(op.resolvent(0.3, z), z)


def test_affine_eval_matches_matrix_product():
    op = AffineOperator(ROT)
    assert np.allclose(op(np.array([1.0, 0.0])), [0.0, -1.0])
    with pytest.raises(DimensionMismatch):
        op(np.zeros(3))


def test_affine_metadata_verified_at_construction():
    with pytest.raises(InfeasibleConstants):
        AffineOperator(ROT, lipschitz=0.5)  # true norm is 1
    with pytest.raises(InfeasibleConstants):
        AffineOperator(np.eye(2), mu=2.0)  # sym min eigenvalue is 1
    with pytest.raises(InfeasibleConstants):
        AffineOperator(-np.eye(2))  # not monotone
    op = AffineOperator(ROT, lipschitz=1.0, mu=0.0)
    assert op.lipschitz == 1.0 and op.mu == 0.0


def test_affine_resolvent_against_direct_solve():
    # oracle: solve (I + alpha M) u = z - alpha b with an independent call
    rng = np.random.default_rng(0)
    m = rng.standard_normal((4, 4))
    m = m @ m.T + (m - m.T)  # monotone: PSD plus skew
    b = rng.standard_normal(4)
    op = AffineOperator(m, b)
    for alpha in (0.1, 1.0, 3.0):
        z = rng.standard_normal(4)
        expected = np.linalg.solve(np.eye(4) + alpha * m, z - alpha * b)
        assert np.allclose(op.resolvent(alpha, z), expected, atol=1e-12)


def test_affine_resolvent_hand_examples():
    op = AffineOperator(ROT)
    u = op.resolvent(1.0, np.array([1.0, 0.0]))
    assert np.allclose(u, [0.5, 0.5], atol=1e-14)
    one_d = AffineOperator([[1.0]])
    assert np.allclose(one_d.resolvent(1.0, np.array([1.0])), [0.5])


def test_iterative_resolvent_agrees_with_exact():
    m = np.array([[2.0, 1.0], [-1.0, 0.5]])
    exact = AffineOperator(m)
    approx = CallableOperator(lambda z: m @ z, 2, lipschitz=exact.lipschitz,
                              mu=exact.mu)
    rng = np.random.default_rng(3)
    for _ in range(5):
        z = rng.standard_normal(2)
        a = exact.resolvent(0.7, z)
        b = approx.resolvent(0.7, z, tol=1e-13)
        assert np.linalg.norm(a - b) < 1e-11


def test_strongly_monotone_solver_budget():
    fn = lambda z: 4.0 * z - np.array([1.0])
    z, evals = solve_strongly_monotone(fn, mu=4.0, lipschitz=4.0,
                                       z0=np.array([10.0]), tol=1e-12)
    assert abs(z[0] - 0.25) < 1e-12 and evals > 0
    with pytest.raises(InnerLoopBudgetExceeded):
        solve_strongly_monotone(fn, mu=4.0, lipschitz=4.0,
                                z0=np.array([10.0]), tol=1e-12,
                                max_iterations=1)


def test_domain_violation():
    op = CallableOperator(lambda z: z, 2, lipschitz=1.0,
                          domain=lambda z: z[1] > 0)
    op(np.array([0.0, 1.0]))
    with pytest.raises(DomainViolation):
        op(np.array([0.0, -1.0]))


def test_shifted_identity_metadata():
    base = AffineOperator(np.eye(3) * 2.0)
    sh = ShiftedIdentityPlus(base, 0.5, np.zeros(3))
    assert sh.mu == 1.0 + 0.5 * 2.0
    assert sh.lipschitz == 1.0 + 0.5 * 2.0
    z = np.array([1.0, 0.0, -1.0])
    assert np.allclose(sh(z), z + 0.5 * base(z))


def test_scaled_and_sum():
    base = AffineOperator(np.eye(2))
    z = np.array([2.0, -4.0])
    assert np.allclose(ScaledOperator(0.5, base)(z), 0.5 * z)
    s = SumOperator([base, ZeroOperator(2)])
    assert np.allclose(s(z), z)
    assert s.lipschitz == 1.0 and s.mu == 1.0
    # resolvent of the scaled operator delegates to the base at c * alpha
    assert np.allclose(ScaledOperator(0.5, base).resolvent(1.0, z),
                       base.resolvent(0.5, z))


# ---------------------------------------------------------------------------
# proximal maps


def test_box_prox_clamp():
    spec = BoxProx([0.0, 0.0], [1.0, 1.0])
    assert np.allclose(prox(spec, 0.3, [2.0, -0.5]), [1.0, 0.0])
    with pytest.raises(ValueError):
        BoxProx([1.0], [0.0])


def test_l1_prox_against_grid_oracle():
    spec = L1Prox(1.0)
    got = prox(spec, 0.5, [2.0, -0.2])
    assert np.allclose(got, [1.5, 0.0])
    # grid-search oracle on the scalar prox objective
    for x in (2.0, -0.2, 0.7, -3.1):
        grid = np.linspace(-5, 5, 200001)
        objective = 0.5 * 1.0 * np.abs(grid) + 0.5 * (grid - x) ** 2
        best = grid[np.argmin(objective)]
        assert abs(prox(spec, 0.5, [x])[0] - best) < 1e-4


def test_zero_prox_identity():
    x = np.array([0.3, -0.7])
    assert np.array_equal(prox(ZeroProx(), 2.0, x), x)


def test_ball_prox():
    spec = BallProx([0.0, 0.0], 1.0)
    inside = np.array([0.3, 0.4])
    assert np.array_equal(prox(spec, 1.0, inside), inside)
    out = prox(spec, 1.0, [3.0, 4.0])
    assert np.allclose(out, [0.6, 0.8])
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12


def test_quadratic_prox_stationarity():
    # oracle: gradient of alpha f + 0.5 ||. - x||^2 vanishes at the prox
    rng = np.random.default_rng(1)
    q = rng.standard_normal((3, 3))
    q = q @ q.T
    c = rng.standard_normal(3)
    spec = QuadraticProx(q, c)
    x = rng.standard_normal(3)
    p = prox(spec, 0.7, x)
    grad = 0.7 * (q @ p + c) + (p - x)
    assert np.linalg.norm(grad) < 1e-10
    with pytest.raises(ValueError):
        QuadraticProx(-np.eye(2), np.zeros(2))


def test_block_prox_operator():
    op = BlockProxOperator([(BoxProx([0.0], [1.0]), 1), (L1Prox(1.0), 2)])
    z = np.array([2.0, 3.0, -0.5])
    out = op.resolvent(0.5, z)
    assert np.allclose(out, [1.0, 2.5, 0.0])
    with pytest.raises(NoForwardEvaluation):
        op(z)


# ---------------------------------------------------------------------------
# derived maps


def test_forward_backward_residual_collapses():
    b = AffineOperator(ROT, np.array([0.5, 0.0]))
    z = np.array([0.2, -0.4])
    # A = 0 makes the backward step the identity
    g = forward_backward_residual(ZeroProx(), b, 0.7, z)
    assert np.allclose(g, b(z), atol=1e-14)
    # B = 0 and z inside the box: fixed point of the projection
    g = forward_backward_residual(BoxProx([0.0, -1.0], [1.0, 1.0]),
                                  ZeroOperator(2), 0.7, np.array([0.5, 0.0]))
    assert np.allclose(g, 0.0)


def test_forward_backward_residual_hand_value():
    # 1-d: box [0,1], B = identity, alpha = 0.5, z = 0.4 -> G = 0.4
    g = forward_backward_residual(BoxProx([0.0], [1.0]),
                                  AffineOperator([[1.0]]), 0.5,
                                  np.array([0.4]))
    assert np.allclose(g, [0.4])


def test_drs_map_collapses_and_hand_value():
    ident = AffineOperator([[1.0]])
    zero = ZeroOperator(1)
    u = np.array([1.0])
    # A = 0: map reduces to J_B
    assert np.allclose(drs_map(zero, ident, 1.0, u),
                       ident.resolvent(1.0, u))
    # B = 0: map reduces to J_A
    assert np.allclose(drs_map(ident, zero, 1.0, u),
                       ident.resolvent(1.0, u))
    # A = B = identity, alpha = 1, u = 1 -> 0.5
    assert np.allclose(drs_map(ident, ident, 1.0, u), [0.5])


# ---------------------------------------------------------------------------
# sampled properties (small draws here; the acceptance suite runs 1000)


@pytest.fixture(scope="module")
def sampled_ops():
    rng = np.random.default_rng(7)
    h = rng.standard_normal((4, 4))
    h = h @ h.T
    k = rng.standard_normal((4, 4))
    k = k - k.T
    return [AffineOperator(h + k), AffineOperator(k),
            ScaledOperator(2.0, AffineOperator(h + k))]


def test_monotonicity_and_lipschitz_sampling(sampled_ops):
    rng = np.random.default_rng(8)
    for op in sampled_ops:
        for _ in range(200):
            z, w = rng.standard_normal((2, op.dim))
            dv, dz = op(z) - op(w), z - w
            assert dv @ dz >= op.mu * dz @ dz - 1e-9
            assert np.linalg.norm(dv) <= op.lipschitz * np.linalg.norm(dz) + 1e-9


def test_resolvent_nonexpansive_and_identity(sampled_ops):
    rng = np.random.default_rng(9)
    for op in sampled_ops[:2]:
        for _ in range(100):
            z, w = rng.standard_normal((2, op.dim))
            jz, jw = op.resolvent(0.4, z), op.resolvent(0.4, w)
            assert np.linalg.norm(jz - jw) <= np.linalg.norm(z - w) + 1e-9
            assert np.linalg.norm(z - jz - 0.4 * op(jz)) < 1e-9


def test_residual_versus_operator_bound(sampled_ops):
    op = sampled_ops[0]
    alpha = 0.5 / op.lipschitz
    rng = np.random.default_rng(10)
    for _ in range(100):
        u = rng.standard_normal(op.dim)
        lhs = np.linalg.norm(u - op.resolvent(alpha, u))
        rhs = alpha / (1 - alpha * op.lipschitz) * np.linalg.norm(op(u))
        assert lhs <= rhs + 1e-9
