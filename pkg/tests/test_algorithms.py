import numpy as np
import pytest

from anchorkit.algorithms import (
    AlgorithmConfig,
    max_step_strongly_monotone,
    ohm_u_form,
    run,
)
from anchorkit.errors import ConfigError, StepSizeCollapse
from anchorkit.operators import (
    AffineOperator,
    BlockProxOperator,
    BoxProx,
    ZeroOperator,
    ZeroProx,
    drs_map,
    forward_backward_residual,
)
from anchorkit.problems import (
    Problem,
    make_bilinear,
    make_box_bilinear_composite,
    make_composite,
    make_figure1,
    make_random_monotone_affine,
    make_random_scsc,
)


def one_d_identity(name="identity-1d"):
    return Problem(name=name, operator=AffineOperator([[1.0]]),
                   solution=np.zeros(1))


def zero_problem(d=2):
    return Problem(name="zero", operator=ZeroOperator(d),
                   solution=np.zeros(d))


def cfg(name, alpha, iters, **kw):
    return AlgorithmConfig(algorithm=name, alpha=alpha, max_iterations=iters,
                           **kw)


# ---------------------------------------------------------------------------
# validation


def test_unknown_algorithm_rejected():
    with pytest.raises(ConfigError):
        run(cfg("NOPE", 0.1, 10), zero_problem(), np.zeros(2))


def test_step_range_validation():
    prob = make_random_scsc(0, 4, 10.0, 1.0)
    with pytest.raises(ConfigError):
        run(cfg("FEG", 0.11, 10), prob, np.zeros(4))  # alpha L >= 1
    top = max_step_strongly_monotone(10.0, 1.0)
    with pytest.raises(ConfigError):
        run(cfg("SM_EAG_PLUS", top * 1.01, 10), prob, np.zeros(4))
    run(cfg("SM_EAG_PLUS", top, 10), prob, np.zeros(4))  # endpoint admissible
    with pytest.raises(ConfigError):
        run(cfg("APS_V", 0.01, 10), prob, np.zeros(4))  # theta required
    with pytest.raises(ConfigError):
        run(cfg("AGM", 0.01, 10), prob, np.zeros(4))  # not a gradient field
    with pytest.raises(ConfigError):
        run(cfg("AGM", 0.025, 10, momentum_a=2.0), make_figure1(),
            np.array([-2.0, 3.0]))
    with pytest.raises(ConfigError):
        run(cfg("OHM_DRS", 0.01, 10), prob, np.zeros(4))  # not composite
    comp = make_box_bilinear_composite(seed=1)
    with pytest.raises(ConfigError):
        run(cfg("FEG", 0.01, 10), comp, np.zeros(comp.dim))


def test_determinism_bitwise():
    prob = make_random_monotone_affine(2, 6, 5.0)
    z0 = np.arange(6, dtype=float)
    a = run(cfg("EAG", 0.02, 50), prob, z0)
    b = run(cfg("EAG", 0.02, 50), prob, z0)
    assert np.array_equal(a.main, b.main)
    assert np.array_equal(a.residual_norms, b.residual_norms)
    comp = make_box_bilinear_composite(seed=3)
    z0 = np.ones(comp.dim)
    ta = run(cfg("APG_STAR", 0.3 / comp.lipschitz, 30), comp, z0)
    tb = run(cfg("APG_STAR", 0.3 / comp.lipschitz, 30), comp, z0)
    assert np.array_equal(ta.main, tb.main)
    assert np.array_equal(ta.auxiliary["z"], tb.auxiliary["z"])


# ---------------------------------------------------------------------------
# classical steppers against hand recursions


def test_gda_one_step():
    t = run(cfg("GDA", 0.5, 1), one_d_identity(), np.array([1.0]))
    assert np.allclose(t.main, [[1.0], [0.5]])


def test_og_hand_recursion():
    t = run(cfg("OG", 0.5, 2), one_d_identity(), np.array([1.0]))
    # z1 = z0 - a B z0 (correction vanishes, z_{-1} = z0); z2 = 0.5 - 2*0.25 + 0.5
    assert np.allclose(t.main[:, 0], [1.0, 0.5, 0.5])


def test_eg_two_stage_oracle():
    m = np.array([[0.0, 1.0], [-1.0, 0.0]])
    prob = Problem(name="rot", operator=AffineOperator(m),
                   solution=np.zeros(2))
    z0 = np.array([1.0, 0.0])
    alpha = 0.1
    half = z0 - alpha * (m @ z0)
    z1 = z0 - alpha * (m @ half)
    t = run(cfg("EG", alpha, 1), prob, z0)
    assert np.allclose(t.main[1], z1, atol=1e-15)
    assert np.allclose(t.auxiliary["half"][0], half, atol=1e-15)


def test_agm_reference_recursion():
    # 1-d f(x) = x^2/2 with alpha = 1, a = 3; independent reference loop
    a, alpha = 3.0, 1.0
    t0 = (0 + a - 1) / a
    t1 = (1 + a - 1) / a
    assert abs((t0 - 1) / t1 - (-1.0 / 3.0)) < 1e-15

    from anchorkit.operators import GradientOperator
    quad = Problem(name="quad-1d",
                   operator=GradientOperator(lambda z: z.copy(), 1, 1.0,
                                             value=lambda z: 0.5 * z[0] ** 2),
                   solution=np.zeros(1))
    x = y = np.array([1.0])
    ref_x = [x]
    for k in range(3):
        t_k = (k + a - 1) / a
        t_next = (k + a) / a
        x_new = y - alpha * y
        y = x_new + ((t_k - 1) / t_next) * (x_new - x)
        x = x_new
        ref_x.append(x)
    t = run(cfg("AGM", alpha, 3), quad, np.array([1.0]))
    assert np.allclose(t.main, np.array(ref_x))
    assert abs(t.main[1, 0]) < 1e-15  # x1 = 0
    assert abs(t.auxiliary["extrapolated"][1, 0] - 1.0 / 3.0) < 1e-15


def test_agm_zero_gradient_frozen():
    from anchorkit.operators import GradientOperator
    flat = Problem(name="flat",
                   operator=GradientOperator(lambda z: np.zeros(2), 2, 0.0,
                                             value=lambda z: 0.0))
    t = run(cfg("AGM", 0.1, 20, momentum_a=5.0), flat, np.array([1.0, 2.0]))
    assert np.array_equal(t.main, np.tile([1.0, 2.0], (21, 1)))


# ---------------------------------------------------------------------------
# anchored forward steppers


def test_anchored_frozen_on_zero_operator():
    # frozen up to anchor-combination rounding (one ulp per step)
    for name in ("EAG", "FEG", "APS", "SM_EAG_PLUS"):
        t = run(cfg(name, 0.5, 10), zero_problem(), np.array([2.0, -1.0]))
        assert np.max(np.abs(t.main - np.array([2.0, -1.0]))) < 1e-13


def test_feg_first_iteration_hand():
    t = run(cfg("FEG", 0.5, 1), one_d_identity(), np.array([1.0]))
    assert t.auxiliary["half"][0, 0] == 1.0  # full anchor at k = 0
    assert np.allclose(t.main[1], [0.5])


def test_eag_first_iteration_hand():
    t = run(cfg("EAG", 0.5, 1), one_d_identity(), np.array([1.0]))
    assert np.allclose(t.auxiliary["half"][0], [0.5])  # z0 - a B z0
    assert np.allclose(t.main[1], [0.75])  # z0 - a B(0.5)


def test_aps_hand_recursion():
    t = run(cfg("APS", 0.5, 1), one_d_identity(), np.array([1.0]))
    assert np.allclose(t.auxiliary["v"][1], [0.5])
    assert np.allclose(t.main[1], [0.75])


def test_sm_eag_plus_reaches_solution_in_one_step():
    prob = Problem(name="one", operator=AffineOperator([[1.0]], mu=1.0),
                   solution=np.zeros(1))
    t = run(cfg("SM_EAG_PLUS", 1.0, 1), prob, np.array([1.0]))
    assert t.auxiliary["half"][0, 0] == 1.0
    assert t.main[1, 0] == 0.0


def test_sm_eag_plus_matches_feg_bitwise_at_mu_zero():
    prob = make_bilinear([[1.0, 0.4], [-0.3, 0.9]])
    z0 = np.array([1.0, -1.0, 0.5, 2.0])
    a = run(cfg("FEG", 0.3 / prob.lipschitz, 120), prob, z0)
    b = run(cfg("SM_EAG_PLUS", 0.3 / prob.lipschitz, 120), prob, z0)
    assert np.array_equal(a.main, b.main)
    assert np.array_equal(a.auxiliary["half"], b.auxiliary["half"])
    assert np.array_equal(a.auxiliary["op_half"], b.auxiliary["op_half"])


def test_eag_v_step_update_formula():
    # alpha_1 = alpha_0 (1 - (1/((1)(3))) a0^2 L^2/(1 - a0^2 L^2)) at k = 0
    prob = one_d_identity()
    t = run(cfg("EAG_V", 0.5, 3), prob, np.array([1.0]))
    a0 = 0.5
    expected = a0 * (1 - (1.0 / 3.0) * (a0 ** 2 / (1 - a0 ** 2)))
    assert abs(t.auxiliary["alpha"][1] - expected) < 1e-15
    assert abs(expected - 4.0 / 9.0) < 1e-15
    # frozen on the zero operator (up to anchor rounding), constant alpha
    tz = run(cfg("EAG_V", 0.5, 5), zero_problem(), np.array([1.0, 1.0]))
    assert np.max(np.abs(tz.main - 1.0)) < 1e-13
    assert np.all(tz.auxiliary["alpha"] == 0.5)


def test_aps_v_step_update_formula():
    prob = one_d_identity()
    theta = 1.0
    a0 = 0.3
    t = run(cfg("APS_V", a0, 2, theta=theta), prob, np.array([1.0]))
    m = 2.0 * (1 + theta)
    b0, b1 = 0.5, 1.0 / 3.0
    expected = a0 * b1 * (1 - b0 ** 2 - m * a0 ** 2) / ((1 - m * a0 ** 2) * b0 * (1 - b0))
    assert abs(t.auxiliary["alpha"][1] - expected) < 1e-15


def test_aps_v_collapse_detected():
    # 1 - M a0^2 > 0 passes validation, but 1 - b0^2 - M a0^2 < 0 sends
    # alpha_1 negative
    prob = one_d_identity()
    a0 = 0.45  # M = 4, M a0^2 = 0.81: valid start, collapses at k = 1
    with pytest.raises(StepSizeCollapse):
        run(cfg("APS_V", a0, 5, theta=1.0), prob, np.array([1.0]))


# ---------------------------------------------------------------------------
# anchored proximal steppers


def test_ohm_hand_recursion():
    t = run(cfg("OHM", 1.0, 2), one_d_identity(), np.array([1.0]))
    assert np.allclose(t.main[:, 0], [1.0, 0.5, 0.375])
    assert np.allclose(t.auxiliary["half"][:2, 0], [1.0, 0.75])
    assert abs(t.residual_norms[0] - 0.5) < 1e-15


def test_ohm_frozen_at_fixed_point():
    t = run(cfg("OHM", 1.0, 5), zero_problem(), np.array([1.0, -2.0]))
    assert np.max(np.abs(t.main - np.array([1.0, -2.0]))) < 1e-13
    assert np.max(t.residual_norms) < 1e-13


def test_ohm_two_forms_equivalent():
    prob = make_random_monotone_affine(8, 6, 4.0)
    z0 = np.linspace(-1, 1, 6)
    t = run(cfg("OHM", 0.2, 60), prob, z0)
    u = ohm_u_form(prob, 0.2, 60, z0)
    assert np.array_equal(t.auxiliary["half"][:61], u)


def test_oc_halpern_degenerates_to_ohm():
    prob = make_random_monotone_affine(8, 6, 4.0)
    z0 = np.linspace(-1, 1, 6)
    a = run(cfg("OHM", 0.2, 40), prob, z0)
    b = run(cfg("OC_HALPERN", 0.2, 40, gamma=1.0 + 1e-14), prob, z0)
    assert np.max(np.abs(a.main - b.main)) < 1e-8


def test_oc_halpern_needs_gamma_or_mu():
    prob = make_random_monotone_affine(8, 6, 4.0)  # mu = 0
    with pytest.raises(ConfigError):
        run(cfg("OC_HALPERN", 0.2, 10), prob, np.zeros(6))
    scsc = make_random_scsc(1, 4, 4.0, 0.5)
    t = run(cfg("OC_HALPERN", 0.2, 10), scsc, np.ones(4))
    assert abs(t.params["gamma"] - np.sqrt(1 + 2 * 0.2 * 0.5)) < 1e-15


def test_ohm_drs_hand_recursion():
    prob = make_composite(
        ZeroProx(), None,
        Problem(name="ident", operator=AffineOperator([[1.0]], mu=1.0)))
    # replace the zero prox with the identity function's prox J(z) = z/2
    comp = Problem(name="ident-pair", operator=prob.operator,
                   prox_part=prob.operator)
    t = run(cfg("OHM_DRS", 1.0, 1), comp, np.array([1.0]))
    assert np.allclose(t.auxiliary["w"][0], [0.5])
    assert np.allclose(t.main[1], [0.75])


def test_ohm_drs_zero_prox_reduces_to_halpern_on_smooth():
    smooth = make_bilinear([[1.0]])
    comp = make_composite(ZeroProx(), ZeroProx(), smooth)
    z0 = np.array([1.0, -0.5])
    t = run(cfg("OHM_DRS", 0.4, 50), comp, z0)
    u = ohm_u_form(smooth, 0.4, 50, z0)
    assert np.max(np.abs(t.main - u[:len(t.main)])) < 1e-12


def test_ohm_drs_zero_smooth_reduces_to_halpern_on_prox():
    box = BoxProx([-0.5, -0.5], [0.5, 0.5])
    comp = Problem(name="boxes", operator=ZeroOperator(2),
                   prox_part=BlockProxOperator([(box, 2)]))
    z0 = np.array([2.0, -3.0])
    t = run(cfg("OHM_DRS", 1.0, 30), comp, z0)
    u = z0.copy()
    ref = [z0.copy()]
    for k in range(30):
        beta = 1.0 / (k + 2)
        u = beta * z0 + (1 - beta) * np.clip(u, -0.5, 0.5)
        ref.append(u.copy())
    assert np.max(np.abs(t.main - np.array(ref))) < 1e-12


def test_ohm_drs_residual_identity():
    comp = make_box_bilinear_composite(seed=9)
    alpha = 0.4 / comp.lipschitz
    z0 = np.array([1.5, -2.0, 0.3, 0.9])
    t = run(cfg("OHM_DRS", alpha, 40), comp, z0)
    for k in (0, 7, 25):
        u = t.main[k]
        w = t.auxiliary["w"][k]
        lhs = np.linalg.norm(u - drs_map(comp.prox_part, comp.operator,
                                         alpha, u))
        g = forward_backward_residual(comp.prox_part, comp.operator, alpha, w)
        assert abs(lhs - alpha * np.linalg.norm(g)) <= 1e-9
        assert abs(lhs - t.residual_norms[k]) <= 1e-12


def test_apg_star_zero_smooth_exits_inner_immediately():
    box = BoxProx([0.0, 0.0], [1.0, 1.0])
    comp = Problem(name="boxes", operator=ZeroOperator(2),
                   prox_part=BlockProxOperator([(box, 2)]))
    z0 = np.array([2.0, -1.0])
    t = run(cfg("APG_STAR", 0.5, 20), comp, z0)
    assert np.all(t.auxiliary["inner_b_evals"] == 1)  # one check, no steps
    assert np.array_equal(t.auxiliary["z"][0], z0)
    # outer update is the anchored iteration on the projection
    u = z0.copy()
    ref = [z0.copy()]
    for k in range(20):
        beta = 1.0 / (k + 2)
        u = beta * z0 + (1 - beta) * np.clip(u, 0.0, 1.0)
        ref.append(u.copy())
    assert np.max(np.abs(t.main - np.array(ref))) < 1e-12


def test_apg_star_epsilon_schedule_constant():
    comp = make_box_bilinear_composite(seed=5)
    alpha = 0.5 / comp.lipschitz
    xi0 = np.ones(comp.dim)
    t = run(cfg("APG_STAR", alpha, 5), comp, xi0)
    expected = 1.0 + np.linalg.norm(comp.operator(xi0)) / comp.lipschitz
    assert abs(t.params["m_constant"] - expected) < 1e-15


def test_apg_star_inner_tolerance_enforced():
    comp = make_box_bilinear_composite(seed=5)
    alpha = 0.5 / comp.lipschitz
    xi0 = 2.0 * np.ones(comp.dim)
    t = run(cfg("APG_STAR", alpha, 25), comp, xi0)
    m = t.params["m_constant"]
    for k in (1, 5, 20):
        z = t.auxiliary["z"][k]
        xi = t.main[k]
        eps_k = m / ((k + 1.0) ** 2 * (k + 2.0))
        gap = np.linalg.norm(z + alpha * comp.operator(z) - xi)
        assert gap <= eps_k * (1 + 1e-12)


# ---------------------------------------------------------------------------
# oracle accounting, anchors, stopping


def test_oracle_accounting():
    prob = make_random_monotone_affine(0, 4, 2.0)
    z0 = np.ones(4)
    for name, per_iter, warm in (("EAG", 2, 0), ("FEG", 2, 0), ("EG", 2, 0),
                                 ("GDA", 1, 0), ("OG", 1, 1), ("APS", 1, 1)):
        t = run(cfg(name, 0.05, 25), prob, z0)
        assert np.all(t.b_per_iter == per_iter), name
        assert t.warmup_b == warm, name
        assert t.total_b_evals() == warm + 25 * per_iter


def test_anchor_dominates_first_half_step():
    # with full anchor weight at k = 0 the first half-iterate depends only
    # on the start: perturbing the problem elsewhere cannot change it
    prob = make_random_monotone_affine(1, 4, 2.0)
    z0 = np.array([0.5, -1.0, 2.0, 0.0])
    t = run(cfg("FEG", 0.1, 1), prob, z0)
    assert np.array_equal(t.auxiliary["half"][0], z0)
    t2 = run(cfg("SM_EAG_PLUS", 0.1, 1), prob, z0)
    assert np.array_equal(t2.auxiliary["half"][0], z0)


def test_early_stop_and_slim_recording():
    prob = make_random_scsc(3, 4, 5.0, 1.0)
    z0 = np.ones(4)
    t = run(cfg("SM_EAG_PLUS", max_step_strongly_monotone(5.0, 1.0), 5000,
                stop_residual=1e-6, record_iterates=False), prob, z0)
    assert t.iterations < 5000
    assert t.residual_norms[-1] <= 1e-6
    assert len(t.main) == 2  # start and final only
    with pytest.raises(ValueError):
        t.cumulative_counts()


def test_trace_lengths_and_immutability():
    prob = make_random_monotone_affine(0, 4, 2.0)
    t = run(cfg("FEG", 0.05, 30), prob, np.ones(4))
    assert len(t.main) == 31
    assert len(t.residual_norms) == 31
    assert len(t.auxiliary["half"]) == 30  # offset by one, documented
    assert np.all(t.residual_norms >= 0)
    with pytest.raises(ValueError):
        t.main[0, 0] = 99.0


def test_varying_step_methods_converge():
    prob = make_random_monotone_affine(5, 6, 2.0)
    z0 = np.ones(6)
    for name, extra in (("EAG_V", {}), ("APS_V", {"theta": 1.0})):
        t = run(cfg(name, 0.2 / prob.lipschitz, 2000, **extra), prob, z0)
        assert t.residual_norms[-1] < 1e-2 * t.residual_norms[0], name
        alphas = t.auxiliary["alpha"]
        assert np.all(alphas > 0)


def test_apg_star_first_tolerance_value():
    # with ||B xi_0|| = L the first inner tolerance is (1 + 1)/(1 * 2) = 1
    comp = Problem(name="ident-box", operator=AffineOperator(np.eye(2)),
                   prox_part=BlockProxOperator(
                       [(BoxProx([-9.0, -9.0], [9.0, 9.0]), 2)]))
    xi0 = np.array([1.0, 0.0])  # ||B xi0|| = 1 = L
    t = run(cfg("APG_STAR", 0.5, 3), comp, xi0)
    m = t.params["m_constant"]
    assert abs(m - 2.0) < 1e-15
    assert abs(m / ((0 + 1) ** 2 * (0 + 2)) - 1.0) < 1e-15
